#include "svsim/platform/trend_tracker.hpp"

#include <algorithm>

#include "svsim/rng.hpp"

namespace svsim::platform {

std::string_view to_string(Lifecycle lc) {
    switch (lc) {
        case Lifecycle::emergence: return "emergence";
        case Lifecycle::peak: return "peak";
        case Lifecycle::decline: return "decline";
    }
    return "?";
}

Lifecycle classify_lifecycle(const std::vector<double>& counts, int64_t k) {
    if (counts.size() < 2) return Lifecycle::peak;
    std::size_t deltas = std::min<std::size_t>(static_cast<std::size_t>(k), counts.size() - 1);
    bool non_decreasing = true;
    bool non_increasing = true;
    for (std::size_t i = counts.size() - deltas; i < counts.size(); ++i) {
        double d = counts[i] - counts[i - 1];
        if (d < 0) non_decreasing = false;
        if (d > 0) non_increasing = false;
    }
    double last_delta = counts.back() - counts[counts.size() - 2];
    if (non_decreasing && last_delta > 0) return Lifecycle::emergence;
    if (non_increasing && last_delta < 0) return Lifecycle::decline;
    return Lifecycle::peak;
}

void TrendTracker::attach(bus::EventBus& bus, const content::ContentStore* store) {
    store_ = store;
    auto count_interaction = [this](const bus::TypedEvent& e) {
        int64_t content_id = e.payload.at("content_id").get<int64_t>();
        record("content/" + std::to_string(content_id), e.step);
        if (store_ != nullptr && store_->contains(content_id)) {
            const content::ContentProfile& p = store_->get(content_id);
            for (const std::string& tag : p.hashtags) {
                record("tag/" + tag, e.step);
            }
            record("cat/" + p.archetype, e.step);
        }
    };
    // Store handlers run at priority 10; the tracker reads resolved metadata.
    bus.subscribe({bus::EventType::VIDEO_WATCHED, "platform.trends", 40}, count_interaction);
    bus.subscribe({bus::EventType::VIDEO_SKIPPED, "platform.trends", 40}, count_interaction);
    bus.subscribe({bus::EventType::VIDEO_ENGAGED, "platform.trends", 40}, count_interaction);
    bus.subscribe({bus::EventType::CONTENT_CREATED, "platform.trends", 40},
                  [this](const bus::TypedEvent& e) {
                      // Posting counts toward hashtag activity as well.
                      std::string tags = e.payload.at("hashtags").get<std::string>();
                      std::size_t start = 0;
                      while (start < tags.size()) {
                          std::size_t comma = tags.find(',', start);
                          if (comma == std::string::npos) comma = tags.size();
                          if (comma > start) {
                              record("tag/" + tags.substr(start, comma - start), e.step);
                          }
                          start = comma + 1;
                      }
                  });
}

void TrendTracker::record(const std::string& key, int64_t step, double weight) {
    buckets_[key][step] += weight;
}

std::vector<double> TrendTracker::window_of(const std::string& key, int64_t step) const {
    std::vector<double> window(static_cast<std::size_t>(config_.window_epochs), 0.0);
    auto it = buckets_.find(key);
    if (it == buckets_.end()) return window;
    int64_t first = step - config_.window_epochs + 1;
    for (const auto& [epoch, count] : it->second) {
        if (epoch < first || epoch > step) continue;
        window[static_cast<std::size_t>(epoch - first)] = count;
    }
    return window;
}

double TrendTracker::velocity(const std::string& key, int64_t step) const {
    return window_total(key, step) / static_cast<double>(config_.window_epochs);
}

double TrendTracker::window_total(const std::string& key, int64_t step) const {
    std::vector<double> window = window_of(key, step);
    double total = 0.0;
    for (double c : window) total += c;
    return total;
}

TrendState TrendTracker::state_for(const std::string& key, int64_t step) const {
    TrendState state;
    state.key = key;
    state.window_counts = window_of(key, step);
    double total = 0.0;
    for (double c : state.window_counts) total += c;
    state.velocity = total / static_cast<double>(config_.window_epochs);
    double score = 0.0;
    for (double c : state.window_counts) {
        score = config_.score_smoothing * c + (1.0 - config_.score_smoothing) * score;
    }
    state.score = score;
    state.lifecycle = classify_lifecycle(state.window_counts, config_.lifecycle_k);
    return state;
}

std::vector<TrendState> TrendTracker::update_trends(int64_t step) const {
    std::vector<TrendState> states;
    for (const auto& [key, epochs] : buckets_) {
        TrendState state = state_for(key, step);
        double total = 0.0;
        for (double c : state.window_counts) total += c;
        if (total > 0.0) states.push_back(std::move(state));
    }
    return states; // map iteration: sorted by key
}

std::vector<std::string> TrendTracker::gate_crossings(int64_t step, double gate) const {
    std::vector<std::string> crossed;
    for (const auto& [key, epochs] : buckets_) {
        if (velocity(key, step) > gate && velocity(key, step - 1) <= gate) {
            crossed.push_back(key);
        }
    }
    return crossed;
}

nlohmann::json TrendTracker::series_json(int64_t step, int64_t epochs,
                                         const std::string& prefix) const {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, buckets] : buckets_) {
        if (key.rfind(prefix, 0) != 0) continue;
        std::vector<double> series;
        double total = 0.0;
        for (int64_t e = step - epochs + 1; e <= step; ++e) {
            auto it = buckets.find(e);
            double c = it == buckets.end() ? 0.0 : it->second;
            series.push_back(c);
            total += c;
        }
        if (total > 0.0) out[key.substr(prefix.size())] = series;
    }
    return out;
}

std::vector<std::string> TrendTracker::top_hashtags(int64_t step, std::size_t k) const {
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& [key, epochs] : buckets_) {
        if (key.rfind("tag/", 0) != 0) continue;
        double v = velocity(key, step);
        if (v > 0.0) ranked.push_back({v, key.substr(4)});
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.push_back(ranked[i].second);
    return out;
}

std::set<std::string> TrendTracker::known_keys(const std::string& prefix) const {
    std::set<std::string> out;
    for (const auto& [key, epochs] : buckets_) {
        if (key.rfind(prefix, 0) == 0) out.insert(key);
    }
    return out;
}

void TrendTracker::prune(int64_t step) {
    int64_t cutoff = step - config_.window_epochs - 1;
    for (auto it = buckets_.begin(); it != buckets_.end();) {
        auto& epochs = it->second;
        for (auto e = epochs.begin(); e != epochs.end();) {
            e = e->first < cutoff ? epochs.erase(e) : std::next(e);
        }
        it = epochs.empty() ? buckets_.erase(it) : std::next(it);
    }
}

uint64_t TrendTracker::state_hash() const {
    uint64_t h = 1469598103934665603ULL;
    for (const auto& [key, epochs] : buckets_) {
        h = fnv1a(key, h);
        for (const auto& [epoch, count] : epochs) {
            h = fnv1a_u64(static_cast<uint64_t>(epoch), h);
            h = fnv1a_u64(static_cast<uint64_t>(count), h);
        }
    }
    return mix64(h);
}

} // namespace svsim::platform
