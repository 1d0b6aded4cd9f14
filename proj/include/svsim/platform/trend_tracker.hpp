/**
 * Rolling-window trend tracking. Interaction events bucket into per-epoch
 * counts per key (hashtags, categories, and per-content activity share the
 * same machinery); velocity is the window total scaled to an hourly rate and
 * lifecycle labels are a pure function of the window counts.
 */

#ifndef SVSIM_PLATFORM_TREND_TRACKER_HPP
#define SVSIM_PLATFORM_TREND_TRACKER_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "svsim/bus/event_bus.hpp"
#include "svsim/content/content_twin.hpp"

namespace svsim::platform {

enum class Lifecycle : uint8_t { emergence, peak, decline };
std::string_view to_string(Lifecycle lc);

struct TrendConfig {
    int64_t window_epochs = 24; // one epoch = one simulated hour = one step
    int64_t lifecycle_k = 3;    // epochs of monotone movement for emergence/decline
    double score_smoothing = 0.3;
};

struct TrendState {
    std::string key;
    std::vector<double> window_counts; // oldest..newest over the window
    double velocity = 0.0;             // events per hour over the window
    double score = 0.0;                // exponentially smoothed intensity
    Lifecycle lifecycle = Lifecycle::peak;
};

/// Lifecycle classification over window counts: non-decreasing tail with a
/// strictly positive final delta is emergence; non-increasing tail with a
/// strictly negative final delta is decline; everything else is peak.
Lifecycle classify_lifecycle(const std::vector<double>& window_counts, int64_t k);

class TrendTracker {
public:
    explicit TrendTracker(TrendConfig config = {}) : config_(config) {}

    /// Counts watches/engagements per hashtag, category, and content key.
    /// The store resolves content ids to metadata.
    void attach(bus::EventBus& bus, const content::ContentStore* store);

    /// Direct ingestion (fixtures, oracles).
    void record(const std::string& key, int64_t step, double weight = 1.0);

    /// Snapshot of every key with activity in the window ending at `step`,
    /// sorted by key.
    std::vector<TrendState> update_trends(int64_t step) const;

    double velocity(const std::string& key, int64_t step) const;
    TrendState state_for(const std::string& key, int64_t step) const;

    /// Window total without the per-hour scaling; callers that know the
    /// entity's age can scale by the effective trailing span instead.
    double window_total(const std::string& key, int64_t step) const;

    /// Keys whose velocity crossed the gate between step-1 and step.
    std::vector<std::string> gate_crossings(int64_t step, double gate) const;

    /// {key: [counts over the last `epochs` epochs]} for forecast prompts.
    nlohmann::json series_json(int64_t step, int64_t epochs, const std::string& prefix) const;

    /// Hashtag keys ranked by window velocity (highest first).
    std::vector<std::string> top_hashtags(int64_t step, std::size_t k) const;

    /// Every key ever recorded under the prefix (window-independent).
    std::set<std::string> known_keys(const std::string& prefix) const;

    void prune(int64_t step); // drops buckets older than the window
    const TrendConfig& config() const { return config_; }
    uint64_t state_hash() const;

private:
    std::vector<double> window_of(const std::string& key, int64_t step) const;

    TrendConfig config_;
    std::map<std::string, std::map<int64_t, double>> buckets_; // key -> epoch -> count
    const content::ContentStore* store_ = nullptr;
};

} // namespace svsim::platform

#endif // SVSIM_PLATFORM_TREND_TRACKER_HPP
