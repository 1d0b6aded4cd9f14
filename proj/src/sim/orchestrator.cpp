#include "svsim/sim/orchestrator.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "svsim/decision/surrogates.hpp"
#include "svsim/errors.hpp"
#include "svsim/sim/reducer.hpp"

namespace svsim::sim {

namespace {

std::string join_ids(const std::vector<platform::ScoredCandidate>& feed) {
    std::string out;
    for (const auto& c : feed) {
        if (!out.empty()) out.push_back(',');
        out += std::to_string(c.content_id);
    }
    return out;
}

} // namespace

Orchestrator::Orchestrator(SimulationConfig config) : config_(std::move(config)) {}
Orchestrator::~Orchestrator() = default;

void Orchestrator::init_twins() {
    bus_ = std::make_unique<bus::EventBus>();
    registry_ = std::make_unique<platform::PlatformRegistry>();
    store_ = std::make_unique<content::ContentStore>(config_.seed);
    trends_ = std::make_unique<platform::TrendTracker>(config_.trends);
    cascades_ = std::make_unique<platform::CascadeTracker>();
    promotion_ = std::make_unique<platform::PromotionPipeline>(config_.gates, registry_.get());
    governance_ =
        std::make_unique<platform::GovernanceController>(config_.governance_goals, registry_.get());

    decision::DecisionConfig decisions = config_.decisions;
    std::unique_ptr<decision::LiveClient> client;
    if (config_.llm_mode == LlmMode::fixture) {
        client = std::make_unique<decision::FixtureClient>();
    } else if (config_.llm_mode == LlmMode::live) {
        const char* endpoint_env = std::getenv("SVSIM_LIVE_ENDPOINT");
        std::string endpoint =
            endpoint_env != nullptr ? endpoint_env : config_.live_endpoint;
        if (!endpoint.empty()) {
            const char* key = std::getenv(config_.live_api_key_env.c_str());
            client = std::make_unique<decision::HttpLiveClient>(endpoint, key ? key : "", 30);
        }
    }
    optimizer_ = std::make_unique<decision::DecisionOptimizer>(decisions, std::move(client),
                                                               bus_.get(), config_.seed);

    // Population. Persona requests (when enabled) flow through the optimizer
    // before any events exist, so replay sees the identical population.
    auto agents = user::init_population(config_.population, config_.tiers, config_.persona_source,
                                        optimizer_.get(), config_.seed);
    user::PolicyConfig policy = config_.policy;
    users_ = std::make_unique<user::UserTwin>(std::move(agents), policy, config_.seed);
    users_->init_social_graph();

    // Handler wiring; priorities order the dispatch per event.
    store_->attach(*bus_);          // 10
    wire_platform_observers();      // 20-25
    promotion_->attach(*bus_);      // 30
    governance_->attach(*bus_);     // 35
    trends_->attach(*bus_, store_.get());  // 40
    cascades_->attach(*bus_);      // 40
    users_->attach(*bus_, store_.get());   // 50
    metrics_ = std::make_unique<MetricsCollector>();
    metrics_->attach(*bus_);        // 90

    // Planner cohort: deterministic stratified assignment by creator id.
    std::vector<int64_t> creators = users_->creator_ids();
    std::size_t s1_count = static_cast<std::size_t>(
        std::ceil(config_.planner_adoption * static_cast<double>(creators.size())));
    s1_count = std::min(s1_count, creators.size());
    for (std::size_t i = 0; i < s1_count; ++i) s1_planners_.insert(creators[i]);

    registry_->register_platform_handler("platform.action_router");
    registry_->commit("platform.action_router",
                      platform::Mutation::set_control("config", config_.to_json()));

    next_content_id_ = 1;
    initialized_ = true;
}

void Orchestrator::wire_platform_observers() {
    registry_->register_platform_handler("platform.observer");
    using bus::EventType;
    auto commit = [this](platform::Mutation m) {
        registry_->commit("platform.observer", std::move(m));
    };
    auto impression = [this, commit](const bus::TypedEvent& e) {
        commit(platform::Mutation::incr_aggregate(
            "content", std::to_string(e.payload.at("content_id").get<int64_t>()), "views", 1.0));
    };
    bus_->subscribe({EventType::VIDEO_WATCHED, "platform.observer", 20}, impression);
    bus_->subscribe({EventType::VIDEO_SKIPPED, "platform.observer", 20}, impression);
    bus_->subscribe({EventType::VIDEO_ENGAGED, "platform.observer", 20},
                    [commit](const bus::TypedEvent& e) {
                        std::string kind = e.payload.at("engagement_type").get<std::string>();
                        if (kind != "like" && kind != "share" && kind != "comment") return;
                        commit(platform::Mutation::incr_aggregate(
                            "content", std::to_string(e.payload.at("content_id").get<int64_t>()),
                            kind + "s", 1.0));
                    });
    bus_->subscribe({EventType::GIFT_SENT, "platform.observer", 20},
                    [commit](const bus::TypedEvent& e) {
                        commit(platform::Mutation::incr_aggregate(
                            "creator", std::to_string(e.payload.at("creator_id").get<int64_t>()),
                            "gift_revenue", e.payload.at("amount").get<double>()));
                        commit(platform::Mutation::append_ledger("gifts", e.payload));
                    });
    bus_->subscribe({EventType::PURCHASE_COMPLETED, "platform.observer", 20},
                    [commit](const bus::TypedEvent& e) {
                        commit(platform::Mutation::incr_aggregate(
                            "creator", std::to_string(e.payload.at("creator_id").get<int64_t>()),
                            "commerce_revenue", e.payload.at("amount").get<double>()));
                        commit(platform::Mutation::append_ledger("purchases", e.payload));
                    });
    bus_->subscribe({EventType::ACTION_SUBMITTED, "platform.observer", 20},
                    [commit](const bus::TypedEvent& e) {
                        commit(platform::Mutation::append_ledger(
                            "actions", bus::Payload{{"step", e.step},
                                                    {"user_id", e.payload.at("user_id")},
                                                    {"action", e.payload.at("action")}}));
                    });
    // Campaign plans steer creation; the handler keeps the replayable copy.
    bus_->subscribe({EventType::CAMPAIGN_PLANNED, "platform.campaigns", 25},
                    [this, commit](const bus::TypedEvent& e) {
                        int64_t creator = e.payload.at("creator_id").get<int64_t>();
                        nlohmann::json wrapper =
                            nlohmann::json::parse(e.payload.at("plan").get<std::string>());
                        ActivePlan active;
                        active.tick_step = wrapper.at("tick_step").get<int64_t>();
                        active.plan = decision::CampaignPlan::from_json(wrapper.at("plan"));
                        plans_[creator] = std::move(active);
                        commit(platform::Mutation::put_record("campaign", std::to_string(creator),
                                                              wrapper));
                    });
}

void Orchestrator::seed_backlog() {
    for (int64_t creator_id : users_->creator_ids()) {
        const user::AgentProfile& agent = users_->agent(creator_id);
        content::CreatorContext ctx{creator_id, std::string(user::to_string(agent.creator_tier)),
                                    agent.domain_expertise};
        for (std::size_t j = 0; j < config_.initial_content_per_creator; ++j) {
            content::ContentProfile profile = content::create_content(
                ctx, next_content_id_++, 0, {}, config_.caption_source, optimizer_.get(),
                config_.seed, config_.generator);
            bus_->publish(0, bus::EventType::CONTENT_CREATED, "content",
                          content::content_to_payload(profile));
        }
    }
}

void Orchestrator::queue_action(int64_t agent_id, bus::ActionType action) {
    action_events_.push_back(
        BufferedEvent{bus::EventType::ACTION_SUBMITTED, "user",
                      bus::Payload{{"user_id", agent_id},
                                   {"action", std::string(bus::to_string(action))}}});
}

void Orchestrator::queue_outcome(bus::EventType type, std::string source, bus::Payload payload) {
    outcome_events_.push_back(BufferedEvent{type, std::move(source), std::move(payload)});
}

void Orchestrator::run_cycle(int64_t step) {
    optimizer_->set_step(step);
    action_events_.clear();
    outcome_events_.clear();

    // Phase 1: selection, deterministic agent order by id.
    std::vector<std::pair<int64_t, user::SelectedAction>> selections;
    for (std::size_t id = 0; id < users_->size(); ++id) {
        auto selected = users_->select_action(static_cast<int64_t>(id), step,
                                              config_.action_policy, optimizer_.get());
        if (selected) selections.push_back({static_cast<int64_t>(id), *selected});
    }

    // Phase 2: route actions to platform handlers.
    for (const auto& [agent_id, action] : selections) {
        execute_action(agent_id, action, step);
    }

    // Phase 3: deterministic publication - action records, then outcomes.
    for (const BufferedEvent& e : action_events_) {
        bus_->publish(step, e.type, e.source, e.payload);
    }
    for (const BufferedEvent& e : outcome_events_) {
        bus_->publish(step, e.type, e.source, e.payload);
    }

    // Phase 4: scheduled platform routines.
    platform_routines(step);

    nlohmann::json extra;
    extra["llm_spend"] = optimizer_->budget().spent_total();
    auto top = trends_->top_hashtags(step, 1);
    if (!top.empty()) {
        platform::TrendState ts = trends_->state_for("tag/" + top[0], step);
        extra["top_tag"] = top[0];
        extra["top_tag_velocity"] = ts.velocity;
        extra["top_tag_score"] = ts.score;
        extra["top_tag_lifecycle"] = std::string(platform::to_string(ts.lifecycle));
    }
    metrics_->finalize_step(step, std::move(extra));
}

void Orchestrator::execute_action(int64_t agent_id, const user::SelectedAction& action,
                                  int64_t step) {
    switch (action.action) {
        case bus::ActionType::REFRESH: {
            queue_action(agent_id, bus::ActionType::REFRESH);
            serve_feed_for(agent_id, action.payload.value("session_start", false), step);
            return;
        }
        case bus::ActionType::WATCH_VIDEO: {
            queue_action(agent_id, bus::ActionType::WATCH_VIDEO);
            run_encounter(agent_id, action.payload.at("content_id").get<int64_t>(), step);
            return;
        }
        case bus::ActionType::CREATE_VIDEO: {
            queue_action(agent_id, bus::ActionType::CREATE_VIDEO);
            const user::AgentProfile& agent = users_->agent(agent_id);
            content::CreatorContext creator{
                agent_id, std::string(user::to_string(agent.creator_tier)),
                agent.domain_expertise};
            content::CreationContext ctx;
            ctx.trending_tags = trends_->top_hashtags(step, 3);
            ctx.plan_entry = active_plan_entry(agent_id, step);
            content::ContentProfile profile =
                content::create_content(creator, next_content_id_++, step, ctx,
                                        config_.caption_source, optimizer_.get(), config_.seed,
                                        config_.generator);
            queue_outcome(bus::EventType::CONTENT_CREATED, "content",
                          content::content_to_payload(profile));
            return;
        }
        case bus::ActionType::EXIT: {
            queue_action(agent_id, bus::ActionType::EXIT);
            const user::SessionState& session = users_->session(agent_id);
            queue_outcome(bus::EventType::SESSION_ENDED, "user",
                          bus::Payload{{"user_id", agent_id},
                                       {"items_viewed", session.items_viewed},
                                       {"reason", session.boredom_counter >=
                                                          config_.policy.boredom_limit
                                                      ? "boredom"
                                                      : "energy"}});
            return;
        }
        default:
            queue_action(agent_id, action.action); // inert members: logged, no handler
            return;
    }
}

void Orchestrator::serve_feed_for(int64_t agent_id, bool session_start, int64_t step) {
    if (session_start) {
        queue_outcome(bus::EventType::SESSION_STARTED, "user",
                      bus::Payload{{"user_id", agent_id}});
    }
    platform::RecoSnapshot snapshot;
    snapshot.store = store_.get();
    snapshot.following = &users_->following(agent_id);
    snapshot.velocity_of = [this, step](int64_t id) { return content_velocity(id, step); };
    snapshot.eligibility_of = [this, step](int64_t id) {
        double weight = promotion_->eligibility_weight(id);
        const content::ContentProfile& p = store_->get(id);
        return weight * governance_->content_multiplier(p.hashtags, step);
    };
    snapshot.stage_ineligible = [this](int64_t id) {
        const platform::StageRecord* record = promotion_->record_for(id);
        return record != nullptr && record->stage == platform::Stage::limited;
    };
    snapshot.stage_viral = [this](int64_t id) {
        const platform::StageRecord* record = promotion_->record_for(id);
        return record != nullptr && record->stage == platform::Stage::viral;
    };
    platform::FeedResult feed =
        platform::serve_feed(agent_id, users_->preferences(agent_id), snapshot, config_.reco, step);
    queue_outcome(bus::EventType::FEED_SERVED, "platform",
                  bus::Payload{{"user_id", agent_id},
                               {"content_ids", join_ids(feed.feed)},
                               {"feed_size", static_cast<int64_t>(feed.feed.size())}});
    if (config_.trace_feeds && !config_.run_dir.empty()) {
        std::ofstream out(config_.run_dir + "/feed_traces.jsonl", std::ios::app);
        if (out) out << feed.trace.dump() << '\n';
    }
}

void Orchestrator::run_encounter(int64_t agent_id, int64_t content_id, int64_t step) {
    const content::ContentProfile& profile = store_->get(content_id);
    const user::AgentProfile& agent = users_->agent(agent_id);

    interaction::BehaviorParams params = config_.behavior;
    params.monetization_enabled = config_.behavior.monetization_enabled;
    // Familiar creators are easier to follow: memory retention scales the base.
    double retention = users_->creator_retention(agent_id, profile.creator_id, step);
    params.follow_prob_base =
        std::min(1.0, config_.policy.follow_prob_base * (1.0 + std::min(1.0, retention)));

    RngStream rng(config_.seed, "encounter", {agent_id, content_id, step});
    interaction::EncounterOutcome outcome =
        interaction::simulate_encounter(agent, users_->preferences(agent_id), profile, params, rng);

    bus::Payload watch{{"user_id", agent_id},
                       {"content_id", content_id},
                       {"watch_time", outcome.watch_time},
                       {"completion_rate", outcome.completion_rate},
                       {"is_skipped", outcome.skipped}};
    queue_outcome(outcome.skipped ? bus::EventType::VIDEO_SKIPPED : bus::EventType::VIDEO_WATCHED,
                  "interaction", watch);
    if (outcome.skipped) return;

    auto engaged_payload = [&](const std::string& kind) {
        return bus::Payload{{"user_id", agent_id},
                            {"content_id", content_id},
                            {"engagement_type", kind},
                            {"completion_rate", outcome.completion_rate}};
    };
    if (outcome.engagements.count("like")) {
        queue_action(agent_id, bus::ActionType::LIKE);
        queue_outcome(bus::EventType::VIDEO_ENGAGED, "interaction", engaged_payload("like"));
    }
    if (outcome.engagements.count("share")) {
        queue_action(agent_id, bus::ActionType::SHARE);
        queue_outcome(bus::EventType::VIDEO_ENGAGED, "interaction", engaged_payload("share"));
        auto parent = cascades_->last_sharer_among(content_id, users_->following(agent_id));
        queue_outcome(bus::EventType::VIDEO_SHARED, "interaction",
                      bus::Payload{{"user_id", agent_id},
                                   {"content_id", content_id},
                                   {"parent_sharer_id", parent ? *parent : int64_t{-1}}});
    }
    if (outcome.engagements.count("comment")) {
        queue_action(agent_id, bus::ActionType::COMMENT);
        queue_outcome(bus::EventType::VIDEO_ENGAGED, "interaction", engaged_payload("comment"));
        queue_outcome(bus::EventType::COMMENT_POSTED, "interaction",
                      bus::Payload{{"user_id", agent_id},
                                   {"content_id", content_id},
                                   {"text", outcome.comment_text.value_or("nice")}});
    }
    if (outcome.engagements.count("gift")) {
        queue_action(agent_id, bus::ActionType::SEND_GIFT);
        queue_outcome(bus::EventType::GIFT_SENT, "interaction",
                      bus::Payload{{"user_id", agent_id},
                                   {"creator_id", profile.creator_id},
                                   {"content_id", content_id},
                                   {"amount", outcome.gift_amount}});
    }
    if (outcome.followed_creator && profile.creator_id != agent_id &&
        !users_->follows(agent_id, profile.creator_id)) {
        queue_action(agent_id, bus::ActionType::FOLLOW);
        queue_outcome(bus::EventType::FOLLOW_CHANGED, "interaction",
                      bus::Payload{{"follower_id", agent_id},
                                   {"creator_id", profile.creator_id},
                                   {"following", true}});
    }
    if (config_.full_commerce && !outcome.engagements.empty()) {
        RngStream commerce(config_.seed, "commerce", {agent_id, content_id, step});
        if (commerce.next_double() < config_.commerce_conversion &&
            !config_.commerce_prices.empty()) {
            double price =
                config_.commerce_prices[commerce.next_below(config_.commerce_prices.size())];
            queue_action(agent_id, bus::ActionType::PURCHASE);
            queue_outcome(bus::EventType::PURCHASE_COMPLETED, "platform",
                          bus::Payload{{"user_id", agent_id},
                                       {"content_id", content_id},
                                       {"creator_id", profile.creator_id},
                                       {"amount", price}});
        }
    }
}

double Orchestrator::content_velocity(int64_t content_id, int64_t step) const {
    // Events in the trailing window scaled to an hourly rate; for content
    // younger than the window, the trailing span is its own age, so a fresh
    // burst reads as the hourly rate it actually achieved.
    double total = trends_->window_total("content/" + std::to_string(content_id), step);
    int64_t span = config_.trends.window_epochs;
    if (store_->contains(content_id)) {
        int64_t age = step - store_->get(content_id).created_step + 1;
        span = std::clamp<int64_t>(age, 1, span);
    }
    return total / static_cast<double>(span);
}

void Orchestrator::platform_routines(int64_t step) {
    // Exposure-stage maintenance.
    auto velocity_of = [this, step](int64_t id) { return content_velocity(id, step); };
    for (const platform::StageTransition& t :
         promotion_->maintenance(step, *store_, velocity_of)) {
        bus_->publish(step, bus::EventType::STAGE_TRANSITIONED, "platform",
                      bus::Payload{{"content_id", t.content_id},
                                   {"from_stage", std::string(platform::to_string(t.from))},
                                   {"to_stage", std::string(platform::to_string(t.to))},
                                   {"reason", t.reason},
                                   {"engagement_rate", t.metrics.engagement_rate},
                                   {"completion_mean", t.metrics.completion_mean},
                                   {"velocity", t.metrics.velocity}});
        if (t.viral) {
            bus_->publish(step, bus::EventType::VIDEO_GOES_VIRAL, "platform",
                          bus::Payload{{"content_id", t.content_id},
                                       {"velocity", t.metrics.velocity},
                                       {"completion_mean", t.metrics.completion_mean}});
        }
    }

    // Tag velocities crossing the reactive gate are instrumented.
    for (const std::string& key :
         trends_->gate_crossings(step, config_.governance_goals.velocity_gate)) {
        if (key.rfind("tag/", 0) != 0) continue;
        platform::TrendState state = trends_->state_for(key, step);
        bus_->publish(step, bus::EventType::TREND_UPDATED, "platform",
                      bus::Payload{{"key", key.substr(4)},
                                   {"velocity", state.velocity},
                                   {"lifecycle", std::string(platform::to_string(state.lifecycle))},
                                   {"crossed_gate", true}});
    }

    // Governance control tick.
    if (config_.control_interval > 0 && (step + 1) % config_.control_interval == 0) {
        platform::TelemetrySnapshot snapshot;
        snapshot.step = step;
        snapshot.trends = trends_->update_trends(step);
        if (config_.governance_strategy == platform::Strategy::S2) {
            decision::DecisionRequest request;
            request.task = decision::Task::TREND_PREDICTION;
            request.prompt_payload = {{"series", trends_->series_json(step, 4, "tag/")}};
            request.requester = "platform/governance";
            decision::DecisionResult result = optimizer_->submit(request);
            std::size_t emitted = 0;
            for (const auto& f : result.payload.at("forecasts")) {
                if (emitted >= 5) break;
                decision::TrendForecast forecast;
                forecast.hashtag = f.at("hashtag").get<std::string>();
                forecast.confidence = f.at("confidence").get<double>();
                forecast.rationale = f.value("rationale", "");
                snapshot.forecasts.push_back(forecast);
                bus_->publish(step, bus::EventType::TREND_FORECASTED, "platform",
                              bus::Payload{{"hashtag", forecast.hashtag},
                                           {"confidence", forecast.confidence},
                                           {"source", std::string(to_string(result.tier))}});
                ++emitted;
            }
        }
        snapshot.budget_status = optimizer_->spend_report();

        std::vector<platform::GovernanceAction> actions =
            governance_->control_step(snapshot, config_.governance_strategy);
        std::set<std::string> known;
        for (const std::string& key : trends_->known_keys("tag/")) known.insert(key.substr(4));
        for (platform::GovernanceAction action : actions) {
            action = governance_->guarded_execute(action, known, step);
            bus_->publish(step, bus::EventType::GOVERNANCE_ACTION_APPLIED, "platform",
                          bus::Payload{{"kind", std::string(platform::to_string(action.kind))},
                                       {"target", action.target},
                                       {"magnitude", action.magnitude},
                                       {"guard_result", action.guard_passed ? "pass" : "fail"},
                                       {"reason", action.reason},
                                       {"audit_id", action.audit_id}});
        }
    }

    // Campaign planning tick (three simulated days).
    if (config_.campaign_tick > 0 && step % config_.campaign_tick == 0) {
        plan_campaigns(step);
    }

    if (config_.checkpoint_interval > 0 && (step + 1) % config_.checkpoint_interval == 0) {
        reconcile_checkpoint(step);
    }
    // Buckets stay unpruned: the tracker state must be a pure function of the
    // event log so replay reproduces its hash.
}

void Orchestrator::plan_campaigns(int64_t step) {
    int64_t tick = config_.campaign_tick > 0 ? step / config_.campaign_tick : 0;
    for (int64_t creator_id : users_->creator_ids()) {
        const user::AgentProfile& agent = users_->agent(creator_id);
        nlohmann::json plan_json;
        if (s1_planners_.count(creator_id) > 0) {
            // Request-driven planner, degradable to the surrogate by budget.
            nlohmann::json performance = nlohmann::json::array();
            std::vector<const content::ContentProfile*> own;
            for (const auto& [id, p] : store_->items()) {
                if (p.creator_id == creator_id) own.push_back(&p);
            }
            std::sort(own.begin(), own.end(),
                      [](const content::ContentProfile* a, const content::ContentProfile* b) {
                          if (a->created_step != b->created_step)
                              return a->created_step > b->created_step;
                          return a->content_id > b->content_id;
                      });
            for (std::size_t i = 0; i < std::min<std::size_t>(5, own.size()); ++i) {
                performance.push_back({{"views", own[i]->views},
                                       {"likes", own[i]->likes},
                                       {"completion_mean", own[i]->completion_mean()}});
            }
            decision::DecisionRequest request;
            request.task = decision::Task::CAMPAIGN;
            request.prompt_payload = {{"creator_id", creator_id},
                                      {"domain", agent.domain_expertise},
                                      {"trending", trends_->top_hashtags(step, 3)},
                                      {"recent_performance", performance},
                                      {"tick", tick}};
            request.requester = "platform/campaigns";
            plan_json = optimizer_->submit(request).payload;
        } else {
            plan_json =
                decision::surrogate_campaign(agent.domain_expertise, creator_id).to_json();
        }
        nlohmann::json wrapper{{"tick_step", step}, {"plan", plan_json}};
        bus_->publish(step, bus::EventType::CAMPAIGN_PLANNED, "platform",
                      bus::Payload{{"creator_id", creator_id},
                                   {"tick", tick},
                                   {"plan", wrapper.dump()}});
    }
}

std::optional<decision::CampaignPlan::Entry> Orchestrator::active_plan_entry(int64_t creator_id,
                                                                             int64_t step) const {
    auto it = plans_.find(creator_id);
    if (it == plans_.end()) return std::nullopt;
    int64_t day = (step - it->second.tick_step) / 24;
    day = std::clamp<int64_t>(day, 0, 2);
    for (const auto& entry : it->second.plan.entries) {
        if (entry.day_offset == day) return entry;
    }
    return std::nullopt;
}

void Orchestrator::reconcile_checkpoint(int64_t step) {
    auto recount = recount_content_aggregates(bus_->log(), bus_->next_seq());
    nlohmann::json mismatches = nlohmann::json::array();
    nlohmann::json aggregates = nlohmann::json::object();
    for (const auto& [id, fields] : recount) {
        nlohmann::json entry = nlohmann::json::object();
        for (const auto& [field, value] : fields) {
            entry[field] = value;
            double stored = registry_->aggregate("content", std::to_string(id), field);
            if (stored != value) {
                mismatches.push_back({{"content_id", id},
                                      {"field", field},
                                      {"log", value},
                                      {"registry", stored}});
            }
        }
        aggregates[std::to_string(id)] = entry;
    }
    // Cache/durable divergence is a defect as well.
    for (const std::string& key : registry_->reconcile()) {
        mismatches.push_back({{"cache_divergence", key}});
    }
    nlohmann::json checkpoint{{"step", step},
                              {"ok", mismatches.empty()},
                              {"mismatches", mismatches},
                              {"aggregates", aggregates}};
    reconciliation_.push_back(checkpoint);
}

uint64_t Orchestrator::combined_state_hash() const {
    uint64_t h = 1469598103934665603ULL;
    h = fnv1a_u64(users_->state_hash(), h);
    h = fnv1a_u64(store_->state_hash(), h);
    h = fnv1a_u64(promotion_->state_hash(), h);
    h = fnv1a_u64(trends_->state_hash(), h);
    h = fnv1a_u64(cascades_->state_hash(), h);
    h = fnv1a_u64(governance_->state_hash(), h);
    h = fnv1a_u64(registry_->state_hash(), h);
    return mix64(h);
}

uint64_t Orchestrator::replay_state_hash(const SimulationConfig& config,
                                         const std::vector<bus::TypedEvent>& log) {
    Orchestrator fresh(config);
    fresh.init_twins();
    fresh.bus_->replay(log);
    return fresh.combined_state_hash();
}

RunResult Orchestrator::run() {
    if (config_.horizon < 0) {
        throw ConfigError("horizon must be non-negative");
    }
    double share_sum = config_.tiers.elite_share + config_.tiers.active_share +
                       config_.tiers.casual_share + config_.tiers.consumer_share;
    if (std::abs(share_sum - 1.0) > 1e-9) {
        throw ConfigError("tier shares must sum to 1");
    }
    if (!initialized_) {
        init_twins();
        seed_backlog();
    }
    for (int64_t step = 0; step < config_.horizon; ++step) {
        run_cycle(step);
    }

    RunResult result;
    result.summary = metrics_->summary(optimizer_->budget().spent_total());
    result.step_metrics = metrics_->rows();
    result.reconciliation = reconciliation_;
    result.state_hash = combined_state_hash();
    result.spend_report = optimizer_->spend_report();
    std::ostringstream log_bytes;
    bus_->write_log(log_bytes);
    result.log_hash = mix64(fnv1a(log_bytes.str()));
    result.event_count = bus_->log().size();
    result.run_dir = config_.run_dir;
    if (!config_.run_dir.empty()) {
        write_artifacts(result);
    }
    return result;
}

void Orchestrator::write_artifacts(RunResult& result) {
    namespace fs = std::filesystem;
    fs::create_directories(config_.run_dir);
    auto path = [this](const char* name) { return config_.run_dir + "/" + name; };

    std::ofstream(path("config.json")) << config_.to_json().dump(2) << '\n';
    {
        std::ofstream out(path("events.jsonl"));
        bus_->write_log(out);
    }
    {
        std::ofstream out(path("registry.jsonl"));
        for (const auto& record : registry_->journal()) out << record.dump() << '\n';
    }
    std::ofstream(path("registry_snapshot.json")) << registry_->snapshot().dump() << '\n';
    {
        std::ofstream out(path("metrics.csv"));
        out << MetricsCollector::csv_header() << '\n';
        for (const auto& row : result.step_metrics) {
            out << MetricsCollector::csv_row(row) << '\n';
        }
    }
    nlohmann::json summary = result.summary.to_json();
    summary["state_hash"] = result.state_hash;
    summary["log_hash"] = result.log_hash;
    summary["event_count"] = result.event_count;
    summary["seed"] = config_.seed;
    summary["horizon"] = config_.horizon;
    std::ofstream(path("summary.json")) << summary.dump(2) << '\n';
    std::ofstream(path("spend.json")) << result.spend_report.dump(2) << '\n';
    std::ofstream(path("checkpoints.json")) << result.reconciliation.dump(2) << '\n';
}

} // namespace svsim::sim
