#include "svsim/sim/config.hpp"

#include "svsim/errors.hpp"

namespace svsim::sim {

SimulationConfig::SimulationConfig() {
    // Desk-scale calibration. A few hundred agents generate hourly event
    // volumes far below production scale, so rate-based gates need the
    // near-current reading of velocity (short shared window) and a
    // completion gate below the structural ceiling imposed by the hook-gate
    // skip floor; otherwise no item can ever clear the viral gates and the
    // attention distribution flattens artificially.
    trends.window_epochs = 2;
    gates.completion_gate = 0.2;
    behavior.base_completion = 0.5;
    policy.follow_prob_base = 0.1;
    reco.feed_size = 3;
    reco.recency_half_life = 8.0;
}

std::string_view to_string(LlmMode mode) {
    switch (mode) {
        case LlmMode::disabled: return "disabled";
        case LlmMode::fixture: return "fixture";
        case LlmMode::live: return "live";
    }
    return "?";
}

LlmMode llm_mode_from_string(std::string_view name) {
    if (name == "disabled") return LlmMode::disabled;
    if (name == "fixture") return LlmMode::fixture;
    if (name == "live") return LlmMode::live;
    throw ConfigError("unknown llm mode: " + std::string(name));
}

nlohmann::json SimulationConfig::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["horizon"] = horizon;
    j["population"] = population;

    j["tiers"] = {{"elite_share", tiers.elite_share},
                  {"active_share", tiers.active_share},
                  {"casual_share", tiers.casual_share},
                  {"consumer_share", tiers.consumer_share},
                  {"elite_creation", tiers.elite_creation},
                  {"active_creation", tiers.active_creation},
                  {"casual_creation", tiers.casual_creation}};
    j["policy"] = {{"exit_energy_threshold", policy.exit_energy_threshold},
                   {"boredom_limit", policy.boredom_limit},
                   {"energy_decay_lambda", policy.energy_decay_lambda},
                   {"energy_decay_exponent", policy.energy_decay_exponent},
                   {"session_start_prob", policy.session_start_prob},
                   {"follow_prob_base", policy.follow_prob_base}};
    j["persona_source"] =
        persona_source == user::PersonaSource::llm ? "llm" : "template";
    j["action_policy"] = action_policy == user::ActionPolicy::llm ? "llm" : "rule";
    j["caption_source"] = caption_source == content::CaptionSource::llm ? "llm" : "template";

    j["behavior"] = {{"alpha", behavior.alpha},
                     {"beta", behavior.beta},
                     {"epsilon_scale", behavior.epsilon_scale},
                     {"hook_window", behavior.hook_window},
                     {"base_completion", behavior.base_completion},
                     {"lognormal_sigma", behavior.lognormal_sigma},
                     {"match_uplift", behavior.match_uplift},
                     {"engagement_scale", behavior.engagement_scale},
                     {"monetization_enabled", behavior.monetization_enabled},
                     {"follow_prob_base", behavior.follow_prob_base}};

    j["reco"] = {{"variant", std::string(platform::to_string(reco.variant))},
                 {"retrieval_n", reco.retrieval_n},
                 {"feed_size", reco.feed_size},
                 {"diversity_max_per_creator", reco.diversity_max_per_creator},
                 {"hybrid_lambda", reco.hybrid_lambda},
                 {"pre_rank_filter", reco.pre_rank_filter},
                 {"recency_half_life", reco.recency_half_life}};
    j["gates"] = {{"initial_quota", gates.initial_quota},
                  {"expanded_quota", gates.expanded_quota},
                  {"engagement_gate", gates.engagement_gate},
                  {"velocity_gate", gates.velocity_gate},
                  {"completion_gate", gates.completion_gate},
                  {"amplification_factor", gates.amplification_factor},
                  {"limited_trickle", gates.limited_trickle},
                  {"stage_timeout_steps", gates.stage_timeout_steps}};
    j["trends"] = {{"window_epochs", trends.window_epochs},
                   {"lifecycle_k", trends.lifecycle_k}};
    j["governance"] = {{"strategy", std::string(platform::to_string(governance_strategy))},
                       {"velocity_gate", governance_goals.velocity_gate},
                       {"confidence_gate", governance_goals.confidence_gate},
                       {"boost_magnitude", governance_goals.boost_magnitude},
                       {"boost_duration", governance_goals.boost_duration},
                       {"max_concurrent_boosts", governance_goals.max_concurrent_boosts}};
    j["decisions"] = {{"budget_cap", decisions.budget_cap},
                      {"comment_threshold", decisions.comment_threshold},
                      {"persona_threshold", decisions.persona_threshold},
                      {"default_threshold", decisions.default_threshold},
                      {"batch_max", decisions.batch_max},
                      {"flush_window_steps", decisions.flush_window_steps},
                      {"cache_path", decisions.cache_path}};

    j["llm_mode"] = std::string(to_string(llm_mode));
    j["full_commerce"] = full_commerce;
    j["commerce_conversion"] = commerce_conversion;
    j["planner_adoption"] = planner_adoption;
    j["control_interval"] = control_interval;
    j["campaign_tick"] = campaign_tick;
    j["checkpoint_interval"] = checkpoint_interval;
    j["initial_content_per_creator"] = initial_content_per_creator;
    j["trace_feeds"] = trace_feeds;
    j["run_dir"] = run_dir;
    return j;
}

void SimulationConfig::apply_overrides(const nlohmann::json& j) {
    auto get = [&j](const char* key, auto& out) {
        if (j.contains(key)) out = j.at(key).get<std::decay_t<decltype(out)>>();
    };
    get("seed", seed);
    get("horizon", horizon);
    get("population", population);
    if (j.contains("tiers")) {
        const auto& t = j.at("tiers");
        auto g = [&t](const char* key, double& out) {
            if (t.contains(key)) out = t.at(key).get<double>();
        };
        g("elite_share", tiers.elite_share);
        g("active_share", tiers.active_share);
        g("casual_share", tiers.casual_share);
        g("consumer_share", tiers.consumer_share);
        g("elite_creation", tiers.elite_creation);
        g("active_creation", tiers.active_creation);
        g("casual_creation", tiers.casual_creation);
    }
    if (j.contains("policy")) {
        const auto& p = j.at("policy");
        if (p.contains("exit_energy_threshold"))
            policy.exit_energy_threshold = p.at("exit_energy_threshold").get<double>();
        if (p.contains("boredom_limit")) policy.boredom_limit = p.at("boredom_limit").get<int64_t>();
        if (p.contains("energy_decay_lambda"))
            policy.energy_decay_lambda = p.at("energy_decay_lambda").get<double>();
        if (p.contains("session_start_prob"))
            policy.session_start_prob = p.at("session_start_prob").get<double>();
    }
    if (j.contains("persona_source")) {
        persona_source = j.at("persona_source").get<std::string>() == "llm"
                             ? user::PersonaSource::llm
                             : user::PersonaSource::template_bank;
    }
    if (j.contains("action_policy")) {
        action_policy = j.at("action_policy").get<std::string>() == "llm"
                            ? user::ActionPolicy::llm
                            : user::ActionPolicy::rule;
    }
    if (j.contains("caption_source")) {
        caption_source = j.at("caption_source").get<std::string>() == "llm"
                             ? content::CaptionSource::llm
                             : content::CaptionSource::template_bank;
    }
    if (j.contains("behavior")) {
        const auto& b = j.at("behavior");
        auto g = [&b](const char* key, double& out) {
            if (b.contains(key)) out = b.at(key).get<double>();
        };
        g("alpha", behavior.alpha);
        g("beta", behavior.beta);
        g("epsilon_scale", behavior.epsilon_scale);
        g("base_completion", behavior.base_completion);
        g("lognormal_sigma", behavior.lognormal_sigma);
        g("match_uplift", behavior.match_uplift);
        g("engagement_scale", behavior.engagement_scale);
        if (b.contains("monetization_enabled"))
            behavior.monetization_enabled = b.at("monetization_enabled").get<bool>();
    }
    if (j.contains("reco")) {
        const auto& r = j.at("reco");
        if (r.contains("variant")) {
            reco = platform::RecoConfig::preset(
                platform::variant_from_string(r.at("variant").get<std::string>()),
                r.value("hybrid_lambda", 0.5));
        }
        if (r.contains("retrieval_n")) reco.retrieval_n = r.at("retrieval_n").get<std::size_t>();
        if (r.contains("feed_size")) reco.feed_size = r.at("feed_size").get<std::size_t>();
        if (r.contains("diversity_max_per_creator"))
            reco.diversity_max_per_creator = r.at("diversity_max_per_creator").get<std::size_t>();
        if (r.contains("recency_half_life"))
            reco.recency_half_life = r.at("recency_half_life").get<double>();
    }
    if (j.contains("gates")) {
        const auto& g = j.at("gates");
        if (g.contains("initial_quota")) gates.initial_quota = g.at("initial_quota").get<int64_t>();
        if (g.contains("expanded_quota"))
            gates.expanded_quota = g.at("expanded_quota").get<int64_t>();
        if (g.contains("engagement_gate"))
            gates.engagement_gate = g.at("engagement_gate").get<double>();
        if (g.contains("velocity_gate")) gates.velocity_gate = g.at("velocity_gate").get<double>();
        if (g.contains("completion_gate"))
            gates.completion_gate = g.at("completion_gate").get<double>();
        if (g.contains("stage_timeout_steps"))
            gates.stage_timeout_steps = g.at("stage_timeout_steps").get<int64_t>();
    }
    if (j.contains("trends")) {
        const auto& t = j.at("trends");
        if (t.contains("window_epochs")) trends.window_epochs = t.at("window_epochs").get<int64_t>();
        if (t.contains("lifecycle_k")) trends.lifecycle_k = t.at("lifecycle_k").get<int64_t>();
    }
    if (j.contains("governance")) {
        const auto& g = j.at("governance");
        if (g.contains("strategy")) {
            governance_strategy =
                platform::strategy_from_string(g.at("strategy").get<std::string>());
        }
        if (g.contains("velocity_gate"))
            governance_goals.velocity_gate = g.at("velocity_gate").get<double>();
        if (g.contains("confidence_gate"))
            governance_goals.confidence_gate = g.at("confidence_gate").get<double>();
        if (g.contains("boost_magnitude"))
            governance_goals.boost_magnitude = g.at("boost_magnitude").get<double>();
    }
    if (j.contains("decisions")) {
        const auto& d = j.at("decisions");
        if (d.contains("budget_cap")) decisions.budget_cap = d.at("budget_cap").get<double>();
        if (d.contains("comment_threshold"))
            decisions.comment_threshold = d.at("comment_threshold").get<double>();
        if (d.contains("persona_threshold"))
            decisions.persona_threshold = d.at("persona_threshold").get<double>();
        if (d.contains("default_threshold"))
            decisions.default_threshold = d.at("default_threshold").get<double>();
        if (d.contains("cache_path")) decisions.cache_path = d.at("cache_path").get<std::string>();
    }
    if (j.contains("llm_mode")) llm_mode = llm_mode_from_string(j.at("llm_mode").get<std::string>());
    get("full_commerce", full_commerce);
    get("commerce_conversion", commerce_conversion);
    get("planner_adoption", planner_adoption);
    get("control_interval", control_interval);
    get("campaign_tick", campaign_tick);
    get("checkpoint_interval", checkpoint_interval);
    get("initial_content_per_creator", initial_content_per_creator);
    get("trace_feeds", trace_feeds);
    get("run_dir", run_dir);
    if (j.contains("live_endpoint")) live_endpoint = j.at("live_endpoint").get<std::string>();
}

SimulationConfig SimulationConfig::from_json(const nlohmann::json& j) {
    SimulationConfig config;
    config.apply_overrides(j);
    return config;
}

} // namespace svsim::sim
