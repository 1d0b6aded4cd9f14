/**
 * Environment orchestrator: advances simulated time in four-phase cycles.
 *   1. every agent selects at most one action (deterministic id order);
 *   2. actions route to platform handlers (feeds served, encounters
 *      realized, content created), producing buffered events;
 *   3. the buffer publishes - action records first, then outcomes - and the
 *      bus dispatches synchronously to the twins;
 *   4. platform routines run: promotion gates, trend gate crossings,
 *      governance control at the control interval, campaign ticks, ledger
 *      checkpoints.
 * Handlers never draw randomness and never publish, so replaying the event
 * log through freshly initialized twins reproduces every state hash.
 */

#ifndef SVSIM_SIM_ORCHESTRATOR_HPP
#define SVSIM_SIM_ORCHESTRATOR_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svsim/sim/config.hpp"
#include "svsim/sim/metrics.hpp"

namespace svsim::sim {

struct RunResult {
    RunSummary summary;
    std::vector<nlohmann::json> step_metrics;
    nlohmann::json reconciliation; // per-checkpoint ledger comparison results
    uint64_t state_hash = 0;       // combined twin hash at run end
    uint64_t log_hash = 0;         // FNV over the serialized event log bytes
    std::size_t event_count = 0;
    std::string run_dir;
    nlohmann::json spend_report;
};

class Orchestrator {
public:
    explicit Orchestrator(SimulationConfig config);
    ~Orchestrator();

    /// Builds twins and wiring without touching the bus (no events).
    void init_twins();
    /// Publishes the initial content backlog (CONTENT_CREATED at step 0).
    void seed_backlog();
    void run_cycle(int64_t step);
    RunResult run(); // init + backlog + horizon cycles + artifacts

    /// Fresh wiring from an identical config, then log re-dispatch; returns
    /// the combined state hash for replay-equivalence checks.
    static uint64_t replay_state_hash(const SimulationConfig& config,
                                      const std::vector<bus::TypedEvent>& log);

    uint64_t combined_state_hash() const;

    const bus::EventBus& event_bus() const { return *bus_; }
    const user::UserTwin& users() const { return *users_; }
    const content::ContentStore& store() const { return *store_; }
    const platform::PromotionPipeline& promotion() const { return *promotion_; }
    const platform::TrendTracker& trends() const { return *trends_; }
    const platform::CascadeTracker& cascades() const { return *cascades_; }
    const platform::GovernanceController& governance() const { return *governance_; }
    const platform::PlatformRegistry& registry() const { return *registry_; }
    const decision::DecisionOptimizer& optimizer() const { return *optimizer_; }
    const SimulationConfig& config() const { return config_; }
    const std::set<int64_t>& s1_planners() const { return s1_planners_; }

private:
    struct BufferedEvent {
        bus::EventType type;
        std::string source;
        bus::Payload payload;
    };

    void wire_platform_observers();
    void execute_action(int64_t agent_id, const user::SelectedAction& action, int64_t step);
    void run_encounter(int64_t agent_id, int64_t content_id, int64_t step);
    void serve_feed_for(int64_t agent_id, bool session_start, int64_t step);
    double content_velocity(int64_t content_id, int64_t step) const;
    void platform_routines(int64_t step);
    void plan_campaigns(int64_t step);
    void reconcile_checkpoint(int64_t step);
    void queue_action(int64_t agent_id, bus::ActionType action);
    void queue_outcome(bus::EventType type, std::string source, bus::Payload payload);
    std::optional<decision::CampaignPlan::Entry> active_plan_entry(int64_t creator_id,
                                                                   int64_t step) const;
    void write_artifacts(RunResult& result);

    SimulationConfig config_;
    std::unique_ptr<bus::EventBus> bus_;
    std::unique_ptr<platform::PlatformRegistry> registry_;
    std::unique_ptr<content::ContentStore> store_;
    std::unique_ptr<user::UserTwin> users_;
    std::unique_ptr<platform::PromotionPipeline> promotion_;
    std::unique_ptr<platform::TrendTracker> trends_;
    std::unique_ptr<platform::CascadeTracker> cascades_;
    std::unique_ptr<platform::GovernanceController> governance_;
    std::unique_ptr<decision::DecisionOptimizer> optimizer_;
    std::unique_ptr<MetricsCollector> metrics_;

    std::vector<BufferedEvent> action_events_;
    std::vector<BufferedEvent> outcome_events_;
    int64_t next_content_id_ = 1;
    std::set<int64_t> s1_planners_;

    struct ActivePlan {
        int64_t tick_step = 0;
        decision::CampaignPlan plan;
    };
    std::map<int64_t, ActivePlan> plans_;
    nlohmann::json reconciliation_ = nlohmann::json::array();
    bool initialized_ = false;
};

} // namespace svsim::sim

#endif // SVSIM_SIM_ORCHESTRATOR_HPP
