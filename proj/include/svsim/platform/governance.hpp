/**
 * Governance control loop: reads telemetry snapshots, chooses boost or
 * suppress actions per strategy (S0 none, S1 reactive on current velocity,
 * S2 additionally proactive on forecasts), and executes them through guarded
 * wrappers that enforce magnitude bounds, target existence, and the
 * concurrent-boost cap, writing an audit record either way.
 */

#ifndef SVSIM_PLATFORM_GOVERNANCE_HPP
#define SVSIM_PLATFORM_GOVERNANCE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svsim/bus/event_bus.hpp"
#include "svsim/decision/types.hpp"
#include "svsim/platform/registry.hpp"
#include "svsim/platform/trend_tracker.hpp"

namespace svsim::platform {

enum class Strategy : uint8_t { S0, S1, S2 };
std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view name);

struct GovernanceGoals {
    double velocity_gate = 100.0;   // events/hour for reactive boosts
    double confidence_gate = 0.7;   // forecast confidence for proactive boosts
    double boost_magnitude = 2.0;
    int64_t boost_duration = 12;    // epochs a boost stays active
    std::size_t max_concurrent_boosts = 5;
    double magnitude_min = 1.1;
    double magnitude_max = 5.0;
};

struct TelemetrySnapshot {
    int64_t step = 0;
    std::vector<TrendState> trends;
    std::vector<decision::TrendForecast> forecasts;
    decision::json budget_status;
    decision::json aggregate_stats;
};

enum class ActionKind : uint8_t { boost, suppress, none };
std::string_view to_string(ActionKind k);

struct GovernanceAction {
    ActionKind kind = ActionKind::none;
    std::string target; // canonical hashtag key
    double magnitude = 1.0;
    std::string reason;
    bool guard_passed = false; // set by guarded_execute
    int64_t audit_id = -1;     // set by guarded_execute
};

struct ActiveBoost {
    double multiplier = 1.0;
    int64_t expires_step = 0;
};

class GovernanceController {
public:
    GovernanceController(GovernanceGoals goals, PlatformRegistry* registry)
        : goals_(goals), registry_(registry) {}

    /// Applies audited actions from the log; pass registration happens here.
    void attach(bus::EventBus& bus);

    /**
     * Pure proposal step. S0 returns nothing. S1 boosts keys whose current
     * velocity strictly exceeds the gate. S2 additionally pre-boosts
     * forecast entries at or above the confidence gate. Goal constraints:
     * no duplicate or conflicting targets, already-boosted keys are skipped,
     * and the concurrent-boost cap truncates the proposal list.
     */
    std::vector<GovernanceAction> control_step(const TelemetrySnapshot& snapshot,
                                               Strategy strategy) const;

    /**
     * Guarded execution: magnitude bounds, target existence among known
     * keys, concurrent cap. Returns the action with guard_passed and
     * audit_id filled in; the audit record is the caller-publishable event
     * payload. No state changes on failure.
     */
    GovernanceAction guarded_execute(GovernanceAction action,
                                     const std::set<std::string>& known_targets, int64_t step);

    /// Exposure multiplier for a hashtag at a step (1 when not boosted).
    double multiplier_for(const std::string& hashtag, int64_t step) const;

    /// Product of multipliers over the content's hashtags, clamped to the
    /// magnitude bound.
    double content_multiplier(const std::vector<std::string>& hashtags, int64_t step) const;

    std::size_t active_boost_count(int64_t step) const;
    const std::map<std::string, ActiveBoost>& boosts() const { return boosts_; }
    const GovernanceGoals& goals() const { return goals_; }

    uint64_t state_hash() const;

private:
    void apply_audited(const bus::TypedEvent& event);

    GovernanceGoals goals_;
    PlatformRegistry* registry_;
    std::map<std::string, ActiveBoost> boosts_;
    int64_t next_audit_id_ = 0;
};

} // namespace svsim::platform

#endif // SVSIM_PLATFORM_GOVERNANCE_HPP
