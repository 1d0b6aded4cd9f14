/**
 * Whole-simulation configuration: one struct wiring every twin config plus
 * the experiment factors. JSON round-trip supports config files with partial
 * overrides.
 */

#ifndef SVSIM_SIM_CONFIG_HPP
#define SVSIM_SIM_CONFIG_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "svsim/content/content_twin.hpp"
#include "svsim/decision/optimizer.hpp"
#include "svsim/interaction/encounter.hpp"
#include "svsim/platform/cascade_tracker.hpp"
#include "svsim/platform/governance.hpp"
#include "svsim/platform/promotion.hpp"
#include "svsim/platform/recommender.hpp"
#include "svsim/platform/trend_tracker.hpp"
#include "svsim/user/user_twin.hpp"

namespace svsim::sim {

enum class LlmMode : uint8_t { disabled, fixture, live };
std::string_view to_string(LlmMode mode);
LlmMode llm_mode_from_string(std::string_view name);

struct SimulationConfig {
    SimulationConfig(); // applies the desk-scale calibration defaults

    uint64_t seed = 0;
    int64_t horizon = 200;     // steps; one step is one simulated hour
    std::size_t population = 500;

    user::TierConfig tiers;
    user::PolicyConfig policy;
    user::PersonaSource persona_source = user::PersonaSource::template_bank;
    user::ActionPolicy action_policy = user::ActionPolicy::rule;
    content::GeneratorConfig generator;
    content::CaptionSource caption_source = content::CaptionSource::template_bank;
    interaction::BehaviorParams behavior;
    platform::RecoConfig reco = platform::RecoConfig::preset(platform::RecoVariant::tiktok);
    platform::GateConfig gates;
    platform::TrendConfig trends;
    platform::GovernanceGoals governance_goals;
    platform::Strategy governance_strategy = platform::Strategy::S0;
    decision::DecisionConfig decisions;

    LlmMode llm_mode = LlmMode::disabled;
    bool full_commerce = false;      // monetization stack: basic vs full
    double commerce_conversion = 0.01;
    std::vector<double> commerce_prices = {10.0, 25.0, 50.0};
    double planner_adoption = 0.0;   // fraction of creators on the request-driven planner

    int64_t control_interval = 4;    // governance ticks
    int64_t campaign_tick = 72;      // three simulated days
    int64_t checkpoint_interval = 50;
    std::size_t initial_content_per_creator = 2;
    bool trace_feeds = false;

    std::string run_dir;    // empty: keep everything in memory
    std::string live_endpoint;
    std::string live_api_key_env = "SVSIM_API_KEY";

    nlohmann::json to_json() const;
    static SimulationConfig from_json(const nlohmann::json& j); // defaults + present keys
    void apply_overrides(const nlohmann::json& j);
};

} // namespace svsim::sim

#endif // SVSIM_SIM_CONFIG_HPP
