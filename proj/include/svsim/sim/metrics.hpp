/**
 * Run-level metrics: the per-step series collected during a run and the
 * summary the experiment harness reports. The reducer in reducer.hpp
 * recomputes the same summary straight from a serialized event log as an
 * independent check on this collector.
 */

#ifndef SVSIM_SIM_METRICS_HPP
#define SVSIM_SIM_METRICS_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "svsim/bus/event_bus.hpp"

namespace svsim::sim {

struct RunSummary {
    bool empty_run = false; // horizon 0 or no impressions: metrics zeroed
    double mean_watch_time = 0.0; // over watched and skipped impressions combined
    double skip_rate = 0.0;
    double view_gini = 0.0;        // per-content views, zero-view items included
    double gift_revenue = 0.0;
    double gift_gini = 0.0;        // per-creator gift revenue over creators with content
    double hashtag_entropy_bits = 0.0;
    double llm_spend = 0.0;
    double commerce_revenue = 0.0;
    int64_t impressions = 0;
    int64_t watches = 0;
    int64_t skips = 0;
    int64_t likes = 0;
    int64_t shares = 0;
    int64_t comments = 0;
    int64_t gifts = 0;
    int64_t purchases = 0;
    int64_t content_created = 0;
    int64_t sessions = 0;
    double mean_session_length = 0.0; // items viewed per ended session

    nlohmann::json to_json() const;
};

class MetricsCollector {
public:
    void attach(bus::EventBus& bus);

    /// Closes the per-step row; extra carries platform diagnostics
    /// (top trend, boosts) merged into the row.
    void finalize_step(int64_t step, nlohmann::json extra);

    RunSummary summary(double llm_spend) const;

    const std::vector<nlohmann::json>& rows() const { return rows_; }
    const std::map<int64_t, double>& views_per_content() const { return views_per_content_; }
    const std::map<int64_t, double>& gift_revenue_per_creator() const {
        return gift_revenue_per_creator_;
    }
    const std::map<std::string, double>& hashtag_usage() const { return hashtag_usage_; }

    static std::string csv_header();
    static std::string csv_row(const nlohmann::json& row);

private:
    void on_impression(const bus::TypedEvent& event, bool skipped);

    // Per-step accumulators, reset at finalize.
    struct StepCounters {
        int64_t impressions = 0, watches = 0, skips = 0;
        int64_t likes = 0, shares = 0, comments = 0, gifts = 0, purchases = 0;
        int64_t content_created = 0, sessions_started = 0, sessions_ended = 0;
        double watch_time = 0.0, gift_revenue = 0.0, commerce_revenue = 0.0;
        int64_t boosts = 0, forecasts = 0;
    } step_;

    // Whole-run accumulators.
    int64_t impressions_ = 0, watches_ = 0, skips_ = 0;
    int64_t likes_ = 0, shares_ = 0, comments_ = 0, gifts_ = 0, purchases_ = 0;
    int64_t content_created_ = 0, sessions_started_ = 0, sessions_ended_ = 0;
    int64_t session_items_ = 0;
    double watch_time_sum_ = 0.0, gift_revenue_sum_ = 0.0, commerce_revenue_sum_ = 0.0;
    std::map<int64_t, double> views_per_content_;
    std::map<int64_t, double> gift_revenue_per_creator_;
    std::set<int64_t> creators_with_content_;
    std::map<int64_t, std::vector<std::string>> content_hashtags_;
    std::map<std::string, double> hashtag_usage_;
    std::vector<nlohmann::json> rows_;
};

} // namespace svsim::sim

#endif // SVSIM_SIM_METRICS_HPP
