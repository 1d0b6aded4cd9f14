#include "svsim/user/user_twin.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "svsim/content/archetype.hpp"
#include "svsim/errors.hpp"

namespace svsim::user {

namespace {

const char* kAgeBands[] = {"13-17", "18-24", "25-34", "35-44", "45+"};
const char* kRegions[] = {"na", "eu", "latam", "sea", "mena"};

double clamp(double x, double lo, double hi) { return std::clamp(x, lo, hi); }

uint64_t double_bits(double d) {
    uint64_t u;
    std::memcpy(&u, &d, sizeof(u));
    return u;
}

} // namespace

std::vector<AgentProfile> init_population(std::size_t n, const TierConfig& tiers,
                                          PersonaSource persona_source,
                                          decision::DecisionOptimizer* optimizer,
                                          uint64_t master_seed) {
    double share_sum =
        tiers.elite_share + tiers.active_share + tiers.casual_share + tiers.consumer_share;
    if (std::abs(share_sum - 1.0) > 1e-9) {
        throw ConfigError("tier shares must sum to 1");
    }

    std::vector<AgentProfile> agents;
    agents.reserve(n);
    const auto& archetypes = content::archetype_table();

    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng(master_seed, "agent", {static_cast<int64_t>(i)});
        AgentProfile agent;
        agent.agent_id = static_cast<int64_t>(i);

        double u = rng.next_double();
        if (u < tiers.elite_share) {
            agent.creator_tier = CreatorTier::elite;
            agent.creation_probability = tiers.elite_creation;
        } else if (u < tiers.elite_share + tiers.active_share) {
            agent.creator_tier = CreatorTier::active;
            agent.creation_probability = tiers.active_creation;
        } else if (u < tiers.elite_share + tiers.active_share + tiers.casual_share) {
            agent.creator_tier = CreatorTier::casual;
            agent.creation_probability = tiers.casual_creation;
        } else {
            agent.creator_tier = CreatorTier::consumer;
            agent.creation_probability = 0.0; // consumers never post
        }

        agent.domain_expertise = archetypes[rng.next_below(archetypes.size())].name;
        agent.attention_span = clamp(std::exp(rng.normal(std::log(18.0), 0.7)), 0.1, 120.0);
        agent.humor_affinity = rng.next_double();
        agent.toxicity_tolerance = rng.next_double();
        agent.propensities.like = rng.uniform(tiers.like_min, tiers.like_max);
        agent.propensities.comment = rng.uniform(tiers.comment_min, tiers.comment_max);
        agent.propensities.share = rng.uniform(tiers.share_min, tiers.share_max);
        agent.propensities.gift = rng.uniform(tiers.gift_min, tiers.gift_max);
        agent.demographics["age_band"] = kAgeBands[rng.next_below(std::size(kAgeBands))];
        agent.demographics["region"] = kRegions[rng.next_below(std::size(kRegions))];

        if (persona_source == PersonaSource::llm && optimizer != nullptr &&
            (agent.creator_tier == CreatorTier::elite ||
             agent.creator_tier == CreatorTier::active)) {
            decision::DecisionRequest request;
            request.task = decision::Task::PERSONA;
            request.prompt_payload = {{"tier", std::string(to_string(agent.creator_tier))},
                                      {"domain", agent.domain_expertise}};
            request.requester = "user/" + std::to_string(agent.agent_id);
            apply_persona(agent, optimizer->submit(request).payload);
        }
        agents.push_back(std::move(agent));
    }
    return agents;
}

void apply_persona(AgentProfile& profile, const decision::json& persona) {
    decision::validate_result(decision::Task::PERSONA, persona);
    profile.demographics["bio"] = persona.at("bio").get<std::string>();
    profile.demographics["creation_style"] = persona.at("creation_style").get<std::string>();

    // Trait-hash perturbations keep the mapping deterministic: the same
    // persona text always lands on the same parameters.
    double attention_scale = 1.0;
    double engagement_scale = 1.0;
    for (const auto& trait : persona.at("core_traits")) {
        uint64_t h = mix64(fnv1a(trait.get<std::string>()));
        attention_scale *= 0.85 + 0.3 * (static_cast<double>(h % 1000) / 999.0);
        engagement_scale *= 0.85 + 0.3 * (static_cast<double>((h >> 10) % 1000) / 999.0);
    }
    profile.attention_span = clamp(profile.attention_span * attention_scale, 0.1, 120.0);
    profile.propensities.like = clamp(profile.propensities.like * engagement_scale, 0.0, 1.0);
    profile.propensities.comment =
        clamp(profile.propensities.comment * engagement_scale, 0.0, 1.0);
    profile.propensities.share = clamp(profile.propensities.share * engagement_scale, 0.0, 1.0);
    profile.propensities.gift = clamp(profile.propensities.gift * engagement_scale, 0.0, 1.0);
}

UserTwin::UserTwin(std::vector<AgentProfile> agents, PolicyConfig policy, uint64_t master_seed)
    : agents_(std::move(agents)), policy_(policy), feedback_(policy.feedback),
      master_seed_(master_seed) {
    prefs_.resize(agents_.size(), PreferenceState::initial());
    sessions_.resize(agents_.size());
    memories_.resize(agents_.size());
    following_.resize(agents_.size());
}

void UserTwin::init_social_graph(std::size_t follows_per_agent) {
    // Preferential attachment by tier weight: elites attract most follows.
    std::vector<int64_t> weighted_creators;
    for (const AgentProfile& a : agents_) {
        std::size_t weight = 0;
        switch (a.creator_tier) {
            case CreatorTier::elite: weight = 16; break;
            case CreatorTier::active: weight = 4; break;
            case CreatorTier::casual: weight = 1; break;
            case CreatorTier::consumer: weight = 0; break;
        }
        for (std::size_t w = 0; w < weight; ++w) weighted_creators.push_back(a.agent_id);
    }
    if (weighted_creators.empty()) return;
    for (const AgentProfile& a : agents_) {
        RngStream rng(master_seed_, "graph", {a.agent_id});
        std::size_t k = 1 + rng.next_below(follows_per_agent);
        for (std::size_t j = 0; j < k * 3 && following_[a.agent_id].size() < k; ++j) {
            int64_t target = weighted_creators[rng.next_below(weighted_creators.size())];
            if (target != a.agent_id) following_[a.agent_id].insert(target);
        }
    }
}

void UserTwin::attach(bus::EventBus& bus, const content::ContentStore* store) {
    store_ = store;
    using bus::EventType;

    bus.subscribe({EventType::SESSION_STARTED, "user.session", 50}, [this](const bus::TypedEvent& e) {
        SessionState& s = sessions_[e.payload.at("user_id").get<int64_t>()];
        s = SessionState{};
        s.active = true;
        s.started_step = e.step;
    });
    bus.subscribe({EventType::SESSION_ENDED, "user.session", 50}, [this](const bus::TypedEvent& e) {
        SessionState& s = sessions_[e.payload.at("user_id").get<int64_t>()];
        s.active = false;
    });
    bus.subscribe({EventType::FEED_SERVED, "user.session", 50}, [this](const bus::TypedEvent& e) {
        SessionState& s = sessions_[e.payload.at("user_id").get<int64_t>()];
        s.feed.clear();
        s.feed_cursor = 0;
        std::string ids = e.payload.at("content_ids").get<std::string>();
        std::size_t start = 0;
        while (start < ids.size()) {
            std::size_t comma = ids.find(',', start);
            if (comma == std::string::npos) comma = ids.size();
            if (comma > start) s.feed.push_back(std::stoll(ids.substr(start, comma - start)));
            start = comma + 1;
        }
        if (s.feed.empty()) s.boredom_counter += 1; // fruitless refresh
    });
    bus.subscribe({EventType::VIDEO_WATCHED, "user.feedback", 50},
                  [this](const bus::TypedEvent& e) { on_watch(e, false); });
    bus.subscribe({EventType::VIDEO_SKIPPED, "user.feedback", 50},
                  [this](const bus::TypedEvent& e) { on_watch(e, true); });
    bus.subscribe({EventType::VIDEO_ENGAGED, "user.feedback", 50},
                  [this](const bus::TypedEvent& e) { on_engaged(e); });
    bus.subscribe({EventType::FOLLOW_CHANGED, "user.graph", 50}, [this](const bus::TypedEvent& e) {
        int64_t follower = e.payload.at("follower_id").get<int64_t>();
        int64_t creator = e.payload.at("creator_id").get<int64_t>();
        if (e.payload.at("following").get<bool>()) {
            following_[follower].insert(creator);
        } else {
            following_[follower].erase(creator);
        }
    });
}

void UserTwin::on_watch(const bus::TypedEvent& event, bool skipped) {
    int64_t user = event.payload.at("user_id").get<int64_t>();
    int64_t content_id = event.payload.at("content_id").get<int64_t>();
    double watch = event.payload.at("watch_time").get<double>();
    double completion = event.payload.at("completion_rate").get<double>();

    SessionState& s = sessions_[user];
    s.feed_cursor += 1;
    s.items_viewed += 1;
    s.energy_level = std::max(
        0.0, s.energy_level -
                 policy_.energy_decay_lambda * std::pow(watch, policy_.energy_decay_exponent));
    if (skipped) {
        s.boredom_counter += 1;
    } else {
        s.boredom_counter = 0;
    }
    s.satisfaction_window.push_back(completion);
    while (s.satisfaction_window.size() > policy_.satisfaction_window_len) {
        s.satisfaction_window.pop_front();
    }

    if (store_ != nullptr && store_->contains(content_id)) {
        const content::ContentProfile& profile = store_->get(content_id);
        EncounterFeedback feedback{completion, watch, skipped, false};
        prefs_[user] = update_preferences(prefs_[user], profile.compact_vector, feedback,
                                          feedback_);
        if (!skipped) {
            std::string key = "creator/" + std::to_string(profile.creator_id);
            MemoryTrace trace = memories_[user].count(key)
                                    ? memories_[user][key]
                                    : MemoryTrace{key, 0.0, event.step, 0, 24.0};
            memories_[user][key] =
                reinforce_memory(trace, bus::ActionType::WATCH_VIDEO, event.step);
        }
    }
}

void UserTwin::on_engaged(const bus::TypedEvent& event) {
    int64_t user = event.payload.at("user_id").get<int64_t>();
    int64_t content_id = event.payload.at("content_id").get<int64_t>();
    double completion = event.payload.at("completion_rate").get<double>();
    std::string kind = event.payload.at("engagement_type").get<std::string>();

    sessions_[user].boredom_counter = 0;
    if (store_ == nullptr || !store_->contains(content_id)) return;
    const content::ContentProfile& profile = store_->get(content_id);

    bus::ActionType action = bus::ActionType::LIKE;
    if (kind == "share") action = bus::ActionType::SHARE;
    else if (kind == "comment") action = bus::ActionType::COMMENT;

    for (const std::string& key : {"creator/" + std::to_string(profile.creator_id),
                                   "topic/" + profile.archetype}) {
        MemoryTrace trace = memories_[user].count(key) ? memories_[user][key]
                                                       : MemoryTrace{key, 0.0, event.step, 0, 24.0};
        memories_[user][key] = reinforce_memory(trace, action, event.step);
    }

    // The like trigger fires only when the completion trigger did not: one
    // learner update per encounter.
    if (kind == "like" && completion <= feedback_.positive_completion_threshold) {
        EncounterFeedback feedback{completion, completion * profile.duration, false, true};
        prefs_[user] =
            update_preferences(prefs_[user], profile.compact_vector, feedback, feedback_);
    }
}

std::optional<SelectedAction> UserTwin::select_action(int64_t agent_id, int64_t step,
                                                      ActionPolicy policy_kind,
                                                      decision::DecisionOptimizer* optimizer) {
    const AgentProfile& agent = agents_[agent_id];
    SessionState& session = sessions_[agent_id];

    if (!session.active) {
        RngStream start(master_seed_, "session-start", {agent_id, step});
        if (start.next_double() < policy_.session_start_prob) {
            return SelectedAction{bus::ActionType::REFRESH,
                                  bus::Payload{{"user_id", agent_id}, {"session_start", true}}};
        }
        return std::nullopt;
    }

    RngStream create_draw(master_seed_, "create-draw", {agent_id, step});
    double u_create = create_draw.next_double();

    auto rule_choice = [&]() -> SelectedAction {
        if (session.energy_level < policy_.exit_energy_threshold ||
            session.boredom_counter >= policy_.boredom_limit) {
            return {bus::ActionType::EXIT, bus::Payload{{"user_id", agent_id}}};
        }
        if (u_create < agent.creation_probability) {
            return {bus::ActionType::CREATE_VIDEO, bus::Payload{{"user_id", agent_id}}};
        }
        if (session.feed_remaining() > 0) {
            return {bus::ActionType::WATCH_VIDEO,
                    bus::Payload{{"user_id", agent_id},
                                 {"content_id", session.feed[session.feed_cursor]}}};
        }
        return {bus::ActionType::REFRESH,
                bus::Payload{{"user_id", agent_id}, {"session_start", false}}};
    };

    SelectedAction rule_action = rule_choice();
    if (policy_kind == ActionPolicy::rule || optimizer == nullptr) {
        return rule_action;
    }

    decision::DecisionRequest request;
    request.task = decision::Task::ACTION_SELECTION;
    request.prompt_payload = {{"energy", session.energy_level},
                              {"boredom", session.boredom_counter},
                              {"feed_remaining", session.feed_remaining()},
                              {"creation_probability", agent.creation_probability},
                              {"u_create", u_create},
                              {"exit_threshold", policy_.exit_energy_threshold},
                              {"boredom_limit", policy_.boredom_limit}};
    request.requester = "user/" + std::to_string(agent_id);
    decision::DecisionResult result = optimizer->submit(request);
    std::string name = result.payload.at("action").get<std::string>();

    // Clamp inadmissible model choices back to the rule decision.
    try {
        bus::ActionType chosen = bus::action_from_string(name);
        bool admissible = chosen == bus::ActionType::EXIT ||
                          chosen == bus::ActionType::REFRESH ||
                          (chosen == bus::ActionType::CREATE_VIDEO &&
                           agent.creator_tier != CreatorTier::consumer) ||
                          (chosen == bus::ActionType::WATCH_VIDEO && session.feed_remaining() > 0);
        if (!admissible) return rule_action;
        if (chosen == rule_action.action) return rule_action;
        if (chosen == bus::ActionType::WATCH_VIDEO) {
            return SelectedAction{chosen,
                                  bus::Payload{{"user_id", agent_id},
                                               {"content_id", session.feed[session.feed_cursor]}}};
        }
        bus::Payload payload{{"user_id", agent_id}};
        if (chosen == bus::ActionType::REFRESH) payload["session_start"] = false;
        return SelectedAction{chosen, payload};
    } catch (const RegistrationError&) {
        return rule_action;
    }
}

std::optional<MemoryTrace> UserTwin::memory(int64_t agent_id, const std::string& key) const {
    const auto& traces = memories_.at(agent_id);
    auto it = traces.find(key);
    if (it == traces.end()) return std::nullopt;
    return it->second;
}

double UserTwin::creator_retention(int64_t agent_id, int64_t creator_id, int64_t now_step) const {
    auto trace = memory(agent_id, "creator/" + std::to_string(creator_id));
    if (!trace || now_step < trace->last_access_step) return 0.0;
    return retention(*trace, now_step);
}

std::vector<int64_t> UserTwin::creator_ids() const {
    std::vector<int64_t> out;
    for (const AgentProfile& a : agents_) {
        if (a.creator_tier != CreatorTier::consumer) out.push_back(a.agent_id);
    }
    return out;
}

uint64_t UserTwin::state_hash() const {
    uint64_t h = 1469598103934665603ULL;
    for (const AgentProfile& a : agents_) {
        h = fnv1a_u64(static_cast<uint64_t>(a.agent_id), h);
        h = fnv1a(to_string(a.creator_tier), h);
        h = fnv1a_u64(double_bits(a.attention_span), h);
        h = fnv1a_u64(double_bits(a.propensities.like), h);
    }
    for (const PreferenceState& p : prefs_) {
        for (double v : p.content_interests.values) h = fnv1a_u64(double_bits(v), h);
    }
    for (const auto& traces : memories_) {
        for (const auto& [key, t] : traces) {
            h = fnv1a(key, h);
            h = fnv1a_u64(double_bits(t.strength), h);
            h = fnv1a_u64(static_cast<uint64_t>(t.access_count), h);
            h = fnv1a_u64(static_cast<uint64_t>(t.last_access_step), h);
        }
    }
    for (const auto& follows : following_) {
        for (int64_t f : follows) h = fnv1a_u64(static_cast<uint64_t>(f), h);
        h = fnv1a("|", h);
    }
    return mix64(h);
}

} // namespace svsim::user
