#include "svsim/sim/metrics.hpp"

#include <sstream>

#include "svsim/metrics.hpp"

namespace svsim::sim {

nlohmann::json RunSummary::to_json() const {
    return nlohmann::json{{"empty_run", empty_run},
                          {"mean_watch_time", mean_watch_time},
                          {"skip_rate", skip_rate},
                          {"view_gini", view_gini},
                          {"gift_revenue", gift_revenue},
                          {"gift_gini", gift_gini},
                          {"hashtag_entropy_bits", hashtag_entropy_bits},
                          {"llm_spend", llm_spend},
                          {"commerce_revenue", commerce_revenue},
                          {"impressions", impressions},
                          {"watches", watches},
                          {"skips", skips},
                          {"likes", likes},
                          {"shares", shares},
                          {"comments", comments},
                          {"gifts", gifts},
                          {"purchases", purchases},
                          {"content_created", content_created},
                          {"sessions", sessions},
                          {"mean_session_length", mean_session_length}};
}

void MetricsCollector::attach(bus::EventBus& bus) {
    using bus::EventType;
    bus.subscribe({EventType::VIDEO_WATCHED, "metrics", 90},
                  [this](const bus::TypedEvent& e) { on_impression(e, false); });
    bus.subscribe({EventType::VIDEO_SKIPPED, "metrics", 90},
                  [this](const bus::TypedEvent& e) { on_impression(e, true); });
    bus.subscribe({EventType::VIDEO_ENGAGED, "metrics", 90}, [this](const bus::TypedEvent& e) {
        std::string kind = e.payload.at("engagement_type").get<std::string>();
        if (kind == "like") {
            ++step_.likes;
            ++likes_;
        } else if (kind == "share") {
            ++step_.shares;
            ++shares_;
        } else if (kind == "comment") {
            ++step_.comments;
            ++comments_;
        }
        int64_t content = e.payload.at("content_id").get<int64_t>();
        for (const std::string& tag : content_hashtags_[content]) {
            hashtag_usage_[tag] += 1.0;
        }
    });
    bus.subscribe({EventType::GIFT_SENT, "metrics", 90}, [this](const bus::TypedEvent& e) {
        double amount = e.payload.at("amount").get<double>();
        ++step_.gifts;
        ++gifts_;
        step_.gift_revenue += amount;
        gift_revenue_sum_ += amount;
        gift_revenue_per_creator_[e.payload.at("creator_id").get<int64_t>()] += amount;
    });
    bus.subscribe({EventType::PURCHASE_COMPLETED, "metrics", 90}, [this](const bus::TypedEvent& e) {
        ++step_.purchases;
        ++purchases_;
        step_.commerce_revenue += e.payload.at("amount").get<double>();
        commerce_revenue_sum_ += e.payload.at("amount").get<double>();
    });
    bus.subscribe({EventType::CONTENT_CREATED, "metrics", 90}, [this](const bus::TypedEvent& e) {
        ++step_.content_created;
        ++content_created_;
        int64_t id = e.payload.at("content_id").get<int64_t>();
        views_per_content_.emplace(id, 0.0);
        creators_with_content_.insert(e.payload.at("creator_id").get<int64_t>());
        gift_revenue_per_creator_.emplace(e.payload.at("creator_id").get<int64_t>(), 0.0);
        std::vector<std::string> tags;
        std::string joined = e.payload.at("hashtags").get<std::string>();
        std::size_t start = 0;
        while (start < joined.size()) {
            std::size_t comma = joined.find(',', start);
            if (comma == std::string::npos) comma = joined.size();
            if (comma > start) tags.push_back(joined.substr(start, comma - start));
            start = comma + 1;
        }
        content_hashtags_[id] = std::move(tags);
    });
    bus.subscribe({EventType::SESSION_STARTED, "metrics", 90}, [this](const bus::TypedEvent&) {
        ++step_.sessions_started;
        ++sessions_started_;
    });
    bus.subscribe({EventType::SESSION_ENDED, "metrics", 90}, [this](const bus::TypedEvent& e) {
        ++step_.sessions_ended;
        ++sessions_ended_;
        session_items_ += e.payload.at("items_viewed").get<int64_t>();
    });
    bus.subscribe({EventType::GOVERNANCE_ACTION_APPLIED, "metrics", 90},
                  [this](const bus::TypedEvent& e) {
                      if (e.payload.at("guard_result").get<std::string>() == "pass") ++step_.boosts;
                  });
    bus.subscribe({EventType::TREND_FORECASTED, "metrics", 90},
                  [this](const bus::TypedEvent&) { ++step_.forecasts; });
}

void MetricsCollector::on_impression(const bus::TypedEvent& event, bool skipped) {
    double watch = event.payload.at("watch_time").get<double>();
    ++step_.impressions;
    ++impressions_;
    step_.watch_time += watch;
    watch_time_sum_ += watch;
    if (skipped) {
        ++step_.skips;
        ++skips_;
    } else {
        ++step_.watches;
        ++watches_;
    }
    int64_t content = event.payload.at("content_id").get<int64_t>();
    views_per_content_[content] += 1.0;
    for (const std::string& tag : content_hashtags_[content]) {
        hashtag_usage_[tag] += 1.0;
    }
}

void MetricsCollector::finalize_step(int64_t step, nlohmann::json extra) {
    nlohmann::json row = std::move(extra);
    row["step"] = step;
    row["impressions"] = step_.impressions;
    row["watches"] = step_.watches;
    row["skips"] = step_.skips;
    row["watch_time"] = step_.watch_time;
    row["likes"] = step_.likes;
    row["shares"] = step_.shares;
    row["comments"] = step_.comments;
    row["gifts"] = step_.gifts;
    row["gift_revenue"] = step_.gift_revenue;
    row["purchases"] = step_.purchases;
    row["commerce_revenue"] = step_.commerce_revenue;
    row["content_created"] = step_.content_created;
    row["sessions_started"] = step_.sessions_started;
    row["sessions_ended"] = step_.sessions_ended;
    row["boosts"] = step_.boosts;
    row["forecasts"] = step_.forecasts;
    rows_.push_back(std::move(row));
    step_ = StepCounters{};
}

RunSummary MetricsCollector::summary(double llm_spend) const {
    RunSummary s;
    s.llm_spend = llm_spend;
    s.impressions = impressions_;
    s.watches = watches_;
    s.skips = skips_;
    s.likes = likes_;
    s.shares = shares_;
    s.comments = comments_;
    s.gifts = gifts_;
    s.purchases = purchases_;
    s.content_created = content_created_;
    s.sessions = sessions_ended_;
    s.gift_revenue = gift_revenue_sum_;
    s.commerce_revenue = commerce_revenue_sum_;
    if (impressions_ == 0) {
        s.empty_run = true;
        return s;
    }
    s.mean_watch_time = watch_time_sum_ / static_cast<double>(impressions_);
    s.skip_rate = static_cast<double>(skips_) / static_cast<double>(impressions_);
    if (!views_per_content_.empty()) {
        MetricSample views;
        for (const auto& [id, v] : views_per_content_) views.push_back(v);
        s.view_gini = gini(views);
    }
    if (!gift_revenue_per_creator_.empty()) {
        MetricSample revenue;
        for (const auto& [id, v] : gift_revenue_per_creator_) revenue.push_back(v);
        bool any = false;
        for (double v : revenue) any = any || v > 0.0;
        if (any) s.gift_gini = gini(revenue);
    }
    if (!hashtag_usage_.empty()) {
        MetricSample counts;
        for (const auto& [tag, c] : hashtag_usage_) counts.push_back(c);
        s.hashtag_entropy_bits = shannon_entropy_bits(counts);
    }
    if (sessions_ended_ > 0) {
        s.mean_session_length =
            static_cast<double>(session_items_) / static_cast<double>(sessions_ended_);
    }
    return s;
}

std::string MetricsCollector::csv_header() {
    return "step,impressions,watches,skips,watch_time,likes,shares,comments,gifts,gift_revenue,"
           "purchases,commerce_revenue,content_created,sessions_started,sessions_ended,boosts,"
           "forecasts,llm_spend,top_tag,top_tag_velocity,top_tag_score";
}

std::string MetricsCollector::csv_row(const nlohmann::json& row) {
    std::ostringstream out;
    auto num = [&row](const char* key) {
        return row.contains(key) ? row.at(key).dump() : std::string("0");
    };
    out << num("step") << ',' << num("impressions") << ',' << num("watches") << ',' << num("skips")
        << ',' << num("watch_time") << ',' << num("likes") << ',' << num("shares") << ','
        << num("comments") << ',' << num("gifts") << ',' << num("gift_revenue") << ','
        << num("purchases") << ',' << num("commerce_revenue") << ',' << num("content_created")
        << ',' << num("sessions_started") << ',' << num("sessions_ended") << ',' << num("boosts")
        << ',' << num("forecasts") << ',' << num("llm_spend") << ','
        << row.value("top_tag", std::string()) << ',' << num("top_tag_velocity") << ','
        << num("top_tag_score");
    return out.str();
}

} // namespace svsim::sim
