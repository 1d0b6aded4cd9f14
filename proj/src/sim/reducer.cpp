#include "svsim/sim/reducer.hpp"

#include <set>

#include "svsim/metrics.hpp"

namespace svsim::sim {

namespace {

std::vector<std::string> split_tags(const std::string& joined) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < joined.size()) {
        std::size_t comma = joined.find(',', start);
        if (comma == std::string::npos) comma = joined.size();
        if (comma > start) out.push_back(joined.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

} // namespace

RunSummary reduce_summary(const std::vector<bus::TypedEvent>& log, double llm_spend) {
    RunSummary s;
    s.llm_spend = llm_spend;

    std::map<int64_t, std::vector<std::string>> content_tags;
    std::map<int64_t, double> views;
    std::map<int64_t, double> creator_gifts;
    std::map<std::string, double> tag_usage;
    double watch_time = 0.0;
    int64_t session_items = 0;

    for (const bus::TypedEvent& e : log) {
        switch (e.type) {
            case bus::EventType::CONTENT_CREATED: {
                int64_t id = e.payload.at("content_id").get<int64_t>();
                content_tags[id] = split_tags(e.payload.at("hashtags").get<std::string>());
                views.emplace(id, 0.0);
                creator_gifts.emplace(e.payload.at("creator_id").get<int64_t>(), 0.0);
                ++s.content_created;
                break;
            }
            case bus::EventType::VIDEO_WATCHED:
            case bus::EventType::VIDEO_SKIPPED: {
                ++s.impressions;
                if (e.type == bus::EventType::VIDEO_SKIPPED) ++s.skips;
                else ++s.watches;
                watch_time += e.payload.at("watch_time").get<double>();
                int64_t id = e.payload.at("content_id").get<int64_t>();
                views[id] += 1.0;
                for (const std::string& tag : content_tags[id]) tag_usage[tag] += 1.0;
                break;
            }
            case bus::EventType::VIDEO_ENGAGED: {
                std::string kind = e.payload.at("engagement_type").get<std::string>();
                if (kind == "like") ++s.likes;
                else if (kind == "share") ++s.shares;
                else if (kind == "comment") ++s.comments;
                int64_t id = e.payload.at("content_id").get<int64_t>();
                for (const std::string& tag : content_tags[id]) tag_usage[tag] += 1.0;
                break;
            }
            case bus::EventType::GIFT_SENT: {
                ++s.gifts;
                double amount = e.payload.at("amount").get<double>();
                s.gift_revenue += amount;
                creator_gifts[e.payload.at("creator_id").get<int64_t>()] += amount;
                break;
            }
            case bus::EventType::PURCHASE_COMPLETED: {
                ++s.purchases;
                s.commerce_revenue += e.payload.at("amount").get<double>();
                break;
            }
            case bus::EventType::SESSION_ENDED: {
                ++s.sessions;
                session_items += e.payload.at("items_viewed").get<int64_t>();
                break;
            }
            default:
                break;
        }
    }

    if (s.impressions == 0) {
        s.empty_run = true;
        return s;
    }
    s.mean_watch_time = watch_time / static_cast<double>(s.impressions);
    s.skip_rate = static_cast<double>(s.skips) / static_cast<double>(s.impressions);
    if (!views.empty()) {
        MetricSample sample;
        for (const auto& [id, v] : views) sample.push_back(v);
        s.view_gini = gini(sample);
    }
    if (!creator_gifts.empty()) {
        MetricSample sample;
        bool any = false;
        for (const auto& [id, v] : creator_gifts) {
            sample.push_back(v);
            any = any || v > 0.0;
        }
        if (any) s.gift_gini = gini(sample);
    }
    if (!tag_usage.empty()) {
        MetricSample counts;
        for (const auto& [tag, c] : tag_usage) counts.push_back(c);
        s.hashtag_entropy_bits = shannon_entropy_bits(counts);
    }
    if (s.sessions > 0) {
        s.mean_session_length = static_cast<double>(session_items) / static_cast<double>(s.sessions);
    }
    return s;
}

std::map<int64_t, std::map<std::string, double>> recount_content_aggregates(
    const std::vector<bus::TypedEvent>& log, uint64_t seq_limit) {
    std::map<int64_t, std::map<std::string, double>> out;
    for (const bus::TypedEvent& e : log) {
        if (e.seq >= seq_limit) break;
        switch (e.type) {
            case bus::EventType::VIDEO_WATCHED:
            case bus::EventType::VIDEO_SKIPPED:
                out[e.payload.at("content_id").get<int64_t>()]["views"] += 1.0;
                break;
            case bus::EventType::VIDEO_ENGAGED: {
                std::string kind = e.payload.at("engagement_type").get<std::string>();
                if (kind == "like" || kind == "share" || kind == "comment") {
                    out[e.payload.at("content_id").get<int64_t>()][kind + "s"] += 1.0;
                }
                break;
            }
            default:
                break;
        }
    }
    return out;
}

std::map<int64_t, double> hashtag_interaction_series(const std::vector<bus::TypedEvent>& log,
                                                     const std::string& tag) {
    std::set<int64_t> tagged_content;
    std::map<int64_t, double> series;
    for (const bus::TypedEvent& e : log) {
        if (e.type == bus::EventType::CONTENT_CREATED) {
            for (const std::string& t :
                 split_tags(e.payload.at("hashtags").get<std::string>())) {
                if (t == tag) {
                    tagged_content.insert(e.payload.at("content_id").get<int64_t>());
                    break;
                }
            }
            continue;
        }
        if (e.type == bus::EventType::VIDEO_WATCHED || e.type == bus::EventType::VIDEO_SKIPPED ||
            e.type == bus::EventType::VIDEO_ENGAGED) {
            if (tagged_content.count(e.payload.at("content_id").get<int64_t>()) > 0) {
                series[e.step] += 1.0;
            }
        }
    }
    return series;
}

} // namespace svsim::sim
