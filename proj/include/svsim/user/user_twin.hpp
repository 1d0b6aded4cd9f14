/**
 * User twin: the agent population, its evolving per-agent state, and the
 * action-selection policy. All mutation after initialization flows through
 * event handlers, so the twin state is reconstructible from the event log.
 */

#ifndef SVSIM_USER_USER_TWIN_HPP
#define SVSIM_USER_USER_TWIN_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svsim/bus/event_bus.hpp"
#include "svsim/content/content_twin.hpp"
#include "svsim/decision/optimizer.hpp"
#include "svsim/user/agent.hpp"

namespace svsim::user {

struct TierConfig {
    double elite_share = 0.01;
    double active_share = 0.03;
    double casual_share = 0.06;
    double consumer_share = 0.90;
    // Per-step creation probabilities (one step is one simulated hour; elite
    // creators post roughly daily).
    double elite_creation = 1.0 / 24.0;
    double active_creation = 0.5 / 24.0;
    double casual_creation = 0.2 / 24.0;
    // Per-agent propensity draw ranges.
    double like_min = 0.15, like_max = 0.60;
    double comment_min = 0.03, comment_max = 0.20;
    double share_min = 0.015, share_max = 0.15;
    double gift_min = 0.003, gift_max = 0.06;
};

struct PolicyConfig {
    double exit_energy_threshold = 0.05;
    int64_t boredom_limit = 5; // consecutive skips before EXIT
    double energy_decay_lambda = 0.003;
    double energy_decay_exponent = 1.2; // energy' = energy - lambda * watch^exp
    double session_start_prob = 0.35;   // idle agent opens the app per step
    std::size_t satisfaction_window_len = 10;
    double follow_prob_base = 0.04; // chance to follow after a strong engagement
    FeedbackParams feedback;        // learner rates and triggers
};

enum class PersonaSource { template_bank, llm };
enum class ActionPolicy { rule, llm };

/// Next action chosen by an agent, with the payload phase 2 executes.
struct SelectedAction {
    bus::ActionType action;
    bus::Payload payload;
};

/**
 * Population initialization. Tiers are drawn per agent from the configured
 * shares (power-law concentration: consumers dominate, elites are rare);
 * preferences start uniform at 0.1. With PersonaSource::llm, elite and
 * active agents route a PERSONA request through the decision services and
 * the structured persona maps deterministically onto their attributes.
 * Throws ConfigError when tier shares do not sum to 1.
 */
std::vector<AgentProfile> init_population(std::size_t n, const TierConfig& tiers,
                                          PersonaSource persona_source,
                                          decision::DecisionOptimizer* optimizer,
                                          uint64_t master_seed);

/// Deterministic persona-to-parameter mapping: structured persona fields
/// perturb attention span and propensities within their tier ranges.
void apply_persona(AgentProfile& profile, const decision::json& persona);

class UserTwin {
public:
    UserTwin(std::vector<AgentProfile> agents, PolicyConfig policy, uint64_t master_seed);

    /// Seeds a preferential-attachment follow graph among creators.
    void init_social_graph(std::size_t follows_per_agent = 3);

    /// Subscribes all user-side handlers (sessions, feedback learner,
    /// memory, social graph).
    void attach(bus::EventBus& bus, const content::ContentStore* store);

    /// Phase-1 action selection for one agent at one step; nullopt when the
    /// agent stays idle. Pure apart from reads of the agent's own state.
    std::optional<SelectedAction> select_action(int64_t agent_id, int64_t step,
                                                ActionPolicy policy,
                                                decision::DecisionOptimizer* optimizer);

    const std::vector<AgentProfile>& agents() const { return agents_; }
    const AgentProfile& agent(int64_t id) const { return agents_.at(static_cast<std::size_t>(id)); }
    const PreferenceState& preferences(int64_t id) const {
        return prefs_.at(static_cast<std::size_t>(id));
    }
    const SessionState& session(int64_t id) const {
        return sessions_.at(static_cast<std::size_t>(id));
    }
    const std::set<int64_t>& following(int64_t id) const {
        return following_.at(static_cast<std::size_t>(id));
    }
    bool follows(int64_t follower, int64_t creator) const {
        return following_.at(static_cast<std::size_t>(follower)).count(creator) > 0;
    }
    std::optional<MemoryTrace> memory(int64_t agent_id, const std::string& key) const;
    double creator_retention(int64_t agent_id, int64_t creator_id, int64_t now_step) const;

    const PolicyConfig& policy() const { return policy_; }
    std::size_t size() const { return agents_.size(); }

    /// Creator ids (non-consumer agents), ascending.
    std::vector<int64_t> creator_ids() const;

    uint64_t state_hash() const; // durable state only; sessions are transient

private:
    void on_watch(const bus::TypedEvent& event, bool skipped);
    void on_engaged(const bus::TypedEvent& event);

    std::vector<AgentProfile> agents_;
    std::vector<PreferenceState> prefs_;
    std::vector<SessionState> sessions_;
    std::vector<std::map<std::string, MemoryTrace>> memories_;
    std::vector<std::set<int64_t>> following_;
    PolicyConfig policy_;
    FeedbackParams feedback_;
    uint64_t master_seed_;
    const content::ContentStore* store_ = nullptr;
};

} // namespace svsim::user

#endif // SVSIM_USER_USER_TWIN_HPP
