/**
 * Graduated exposure pipeline. New content starts with a small test
 * audience; performance gates advance it to expanded distribution and a
 * viral stage with amplification, or park it in limited trickle traffic.
 * Viral and limited are absorbing. Transitions are proposed here, published
 * as STAGE_TRANSITIONED events, and applied by the pipeline's own handler,
 * which keeps the stage store replay-consistent and mirrored in the registry.
 */

#ifndef SVSIM_PLATFORM_PROMOTION_HPP
#define SVSIM_PLATFORM_PROMOTION_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svsim/bus/event_bus.hpp"
#include "svsim/content/content_twin.hpp"
#include "svsim/platform/registry.hpp"

namespace svsim::platform {

enum class Stage : uint8_t { initial, expanded, viral, limited };
std::string_view to_string(Stage stage);
Stage stage_from_string(std::string_view name);

struct GateConfig {
    int64_t initial_quota = 100;   // test-audience impressions before the first gate
    int64_t expanded_quota = 500;
    double engagement_gate = 0.15; // strictly above advances (as specified)
    double velocity_gate = 100.0;  // events/hour, strictly above
    double completion_gate = 0.5;  // mean completion at or above for viral
    double amplification_factor = 3.0;
    double limited_trickle = 0.1;
    int64_t stage_timeout_steps = 48; // low-traffic items absorb on timeout
};

struct GateMetrics {
    double engagement_rate = 0.0;
    double completion_mean = 0.0;
    double velocity = 0.0; // events/hour over the shared trend window
};

struct StageRecord {
    int64_t content_id = 0;
    Stage stage = Stage::initial;
    int64_t impressions_served = 0;
    int64_t impressions_quota = 0;
    int64_t entered_step = 0;
    double amplification = 1.0; // above 1 only in the viral stage
    GateMetrics gate_metrics;
};

struct StageTransition {
    int64_t content_id = 0;
    Stage from = Stage::initial;
    Stage to = Stage::limited;
    std::string reason;
    bool viral = false; // emit VIDEO_GOES_VIRAL alongside
    GateMetrics metrics;
};

/**
 * Pure gate evaluation. No-op (nullopt) before the quota is consumed.
 * initial: engagement above the gate expands, otherwise limited;
 * expanded: velocity above the gate and completion at the gate or better
 * goes viral, otherwise limited. Absorbing stages never transition.
 */
std::optional<StageTransition> evaluate_gate(const StageRecord& record, const GateMetrics& metrics,
                                             const GateConfig& config, int64_t step);

class PromotionPipeline {
public:
    PromotionPipeline(GateConfig config, PlatformRegistry* registry)
        : config_(config), registry_(registry) {}

    /// Subscribes admit (CONTENT_CREATED), impression counting
    /// (VIDEO_WATCHED/SKIPPED), and transition application
    /// (STAGE_TRANSITIONED).
    void attach(bus::EventBus& bus);

    /// Idempotent admission into the initial stage.
    StageRecord admit(int64_t content_id, int64_t step);

    /// Periodic gate pass: evaluates quota-complete records and force-
    /// evaluates stale ones so every item eventually absorbs. Returns the
    /// proposed transitions for the orchestrator to publish.
    std::vector<StageTransition> maintenance(int64_t step,
                                             const content::ContentStore& store,
                                             const std::function<double(int64_t)>& velocity_of);

    /// Exposure multiplier: amplification when viral, trickle when limited,
    /// 1 otherwise (unknown ids count as unstaged: 1).
    double eligibility_weight(int64_t content_id) const;

    const StageRecord* record_for(int64_t content_id) const;
    const std::map<int64_t, StageRecord>& records() const { return records_; }
    uint64_t state_hash() const;

private:
    void apply_transition(const StageTransition& t, int64_t step);
    void mirror_to_registry(const StageRecord& record);

    GateConfig config_;
    PlatformRegistry* registry_;
    std::map<int64_t, StageRecord> records_;
};

} // namespace svsim::platform

#endif // SVSIM_PLATFORM_PROMOTION_HPP
