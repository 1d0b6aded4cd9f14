#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "svsim/content/content_twin.hpp"
#include "svsim/decision/surrogates.hpp"
#include "svsim/errors.hpp"
#include "svsim/user/user_twin.hpp"

using namespace svsim;
using namespace svsim::user;

namespace {

AgentProfile make_creator(int64_t id, CreatorTier tier, double creation_prob) {
    AgentProfile a;
    a.agent_id = id;
    a.creator_tier = tier;
    a.creation_probability = creation_prob;
    a.domain_expertise = "PETS";
    a.propensities = {0.2, 0.05, 0.03, 0.01};
    return a;
}

bus::Payload watched(int64_t user, int64_t content, double watch, double completion,
                     bool skipped) {
    return bus::Payload{{"user_id", user},
                        {"content_id", content},
                        {"watch_time", watch},
                        {"completion_rate", completion},
                        {"is_skipped", skipped}};
}

void start_session(bus::EventBus& bus, int64_t user, const std::string& feed_ids) {
    bus.publish(0, bus::EventType::SESSION_STARTED, "user", {{"user_id", user}});
    bus.publish(0, bus::EventType::FEED_SERVED, "platform",
                {{"user_id", user},
                 {"content_ids", feed_ids},
                 {"feed_size", static_cast<int64_t>(std::count(feed_ids.begin(), feed_ids.end(),
                                                               ',') +
                                                    (feed_ids.empty() ? 0 : 1))}});
}

} // namespace

TEST_CASE("init_population: tier shares, initial preferences, determinism") {
    auto agents = init_population(2000, TierConfig{}, PersonaSource::template_bank, nullptr, 42);
    REQUIRE(agents.size() == 2000);

    int consumers = 0;
    for (const auto& a : agents) {
        if (a.creator_tier == CreatorTier::consumer) {
            ++consumers;
            CHECK(a.creation_probability == 0.0);
        }
        CHECK(a.attention_span >= 0.1);
        CHECK(a.attention_span <= 120.0);
    }
    double consumer_share = static_cast<double>(consumers) / 2000.0;
    CHECK(consumer_share == doctest::Approx(0.90).epsilon(0.03));

    // Fresh preferences are uniform 0.1 over 50 dims.
    UserTwin twin(agents, PolicyConfig{}, 42);
    for (int64_t id : {0L, 500L, 1999L}) {
        const DenseVector& p = twin.preferences(id).content_interests;
        REQUIRE(p.dim() == 50);
        for (double v : p.values) CHECK(v == 0.1);
    }

    CHECK(init_population(0, TierConfig{}, PersonaSource::template_bank, nullptr, 42).empty());

    TierConfig bad;
    bad.consumer_share = 0.5;
    CHECK_THROWS_AS(init_population(10, bad, PersonaSource::template_bank, nullptr, 42),
                    ConfigError);
}

TEST_CASE("init_population: equal seed gives identical tables, tiers order creation rates") {
    auto a = init_population(300, TierConfig{}, PersonaSource::template_bank, nullptr, 7);
    auto b = init_population(300, TierConfig{}, PersonaSource::template_bank, nullptr, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].creator_tier == b[i].creator_tier);
        CHECK(a[i].attention_span == b[i].attention_span);
        CHECK(a[i].propensities.like == b[i].propensities.like);
        CHECK(a[i].domain_expertise == b[i].domain_expertise);
    }

    TierConfig tiers;
    CHECK(tiers.elite_creation > tiers.active_creation);
    CHECK(tiers.active_creation > tiers.casual_creation);
    CHECK(tiers.casual_creation > 0.0);
}

TEST_CASE("retention: frozen exponential values and spacing effect") {
    MemoryTrace trace{"creator/1", 1.0, 0, 0, 10.0};
    CHECK(retention(trace, 0) == doctest::Approx(1.0)); // dt = 0 keeps full strength
    CHECK(retention(trace, 10) == doctest::Approx(0.367879).epsilon(1e-6));

    MemoryTrace spaced = trace;
    spaced.access_count = 5;
    CHECK(retention(spaced, 10) > retention(trace, 10));

    MemoryTrace bad = trace;
    bad.tau = 0.0;
    CHECK_THROWS_AS(retention(bad, 5), DomainError);
    CHECK_THROWS_AS(retention(trace, -1), DomainError);
}

TEST_CASE("retention: strictly decreasing in dt, increasing in access count") {
    MemoryTrace trace{"topic/PETS", 2.0, 100, 2, 16.0};
    double prev = retention(trace, 100);
    for (int64_t dt = 1; dt <= 50; ++dt) {
        double r = retention(trace, 100 + dt);
        CHECK(r < prev);
        prev = r;
    }
    for (int64_t extra = 1; extra <= 10; ++extra) {
        MemoryTrace more = trace;
        more.access_count = trace.access_count + extra;
        CHECK(retention(more, 140) > retention(trace, 140));
    }
}

TEST_CASE("reinforce_memory: share beats like, counts advance, strength grows") {
    MemoryTrace base{"creator/9", 0.5, 3, 1, 24.0};
    MemoryTrace shared = reinforce_memory(base, bus::ActionType::SHARE, 5);
    MemoryTrace liked = reinforce_memory(base, bus::ActionType::LIKE, 5);
    MemoryTrace watched_trace = reinforce_memory(base, bus::ActionType::WATCH_VIDEO, 5);
    CHECK(shared.strength > liked.strength);
    CHECK(liked.strength > watched_trace.strength);
    CHECK(shared.access_count == base.access_count + 1);

    MemoryTrace t = base;
    double prev = t.strength;
    for (int i = 0; i < 10; ++i) {
        t = reinforce_memory(t, bus::ActionType::LIKE, 5 + i);
        CHECK(t.strength > prev);
        prev = t.strength;
    }
}

TEST_CASE("feedback learner: direction of preference movement") {
    PreferenceState pref = PreferenceState::initial();
    DenseVector content(50, 0.0);
    content[3] = 1.0;
    content[25] = 0.8;
    content[44] = 0.3;
    FeedbackParams params;

    // High completion nudges toward the content vector.
    PreferenceState up = update_preferences(pref, content, {0.9, 13.5, false, false}, params);
    CHECK(cosine(up.content_interests, content) > cosine(pref.content_interests, content));

    // Immediate skip pushes away.
    PreferenceState down = update_preferences(pref, content, {0.1, 2.5, true, false}, params);
    CHECK(cosine(down.content_interests, content) < cosine(pref.content_interests, content));

    // A like triggers the positive step even at modest completion.
    PreferenceState liked = update_preferences(pref, content, {0.5, 8.0, false, true}, params);
    CHECK(cosine(liked.content_interests, content) > cosine(pref.content_interests, content));

    // No trigger: bit-identical output.
    PreferenceState same = update_preferences(pref, content, {0.5, 8.0, false, false}, params);
    CHECK(same.content_interests.values == pref.content_interests.values);

    DenseVector wrong_dim(10, 0.5);
    CHECK_THROWS_AS(update_preferences(pref, wrong_dim, {0.9, 1.0, false, false}, params),
                    DomainError);
}

TEST_CASE("feedback learner: entries stay in [0,1] under 10k random updates") {
    RngStream rng(13, "pref-fuzz", {0});
    PreferenceState pref = PreferenceState::initial();
    FeedbackParams params;
    for (int i = 0; i < 10000; ++i) {
        DenseVector content(50);
        for (auto& v : content.values) v = rng.uniform(-0.2, 1.2);
        EncounterFeedback outcome;
        outcome.completion_rate = rng.next_double();
        outcome.watch_time = rng.uniform(0.0, 60.0);
        outcome.skipped = rng.bernoulli(0.4);
        outcome.liked = rng.bernoulli(0.2);
        pref = update_preferences(pref, content, outcome, params);
        for (double v : pref.content_interests.values) {
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
        }
    }
}

TEST_CASE("select_action: rule policy covers exit, create, watch, refresh") {
    std::vector<AgentProfile> agents = {make_creator(0, CreatorTier::elite, 1.0),
                                        make_creator(1, CreatorTier::consumer, 0.0)};
    PolicyConfig policy;
    policy.session_start_prob = 1.0;
    UserTwin twin(agents, policy, 42);
    bus::EventBus bus;
    twin.attach(bus, nullptr);

    // Idle agent with certain session start: REFRESH ignition.
    auto ignition = twin.select_action(1, 0, ActionPolicy::rule, nullptr);
    REQUIRE(ignition.has_value());
    CHECK(ignition->action == bus::ActionType::REFRESH);
    CHECK(ignition->payload.at("session_start").get<bool>());

    // In-session consumer with a feed: watches the next item.
    start_session(bus, 1, "11,12,13");
    auto watch = twin.select_action(1, 1, ActionPolicy::rule, nullptr);
    REQUIRE(watch.has_value());
    CHECK(watch->action == bus::ActionType::WATCH_VIDEO);
    CHECK(watch->payload.at("content_id").get<int64_t>() == 11);

    // Feed exhausted: REFRESH without session start.
    bus.publish(1, bus::EventType::VIDEO_WATCHED, "interaction", watched(1, 11, 5, 0.5, false));
    bus.publish(1, bus::EventType::VIDEO_WATCHED, "interaction", watched(1, 12, 5, 0.5, false));
    bus.publish(1, bus::EventType::VIDEO_WATCHED, "interaction", watched(1, 13, 5, 0.5, false));
    auto refresh = twin.select_action(1, 2, ActionPolicy::rule, nullptr);
    REQUIRE(refresh.has_value());
    CHECK(refresh->action == bus::ActionType::REFRESH);
    CHECK_FALSE(refresh->payload.at("session_start").get<bool>());

    // Elite creator with certain creation draw creates.
    start_session(bus, 0, "11");
    auto create = twin.select_action(0, 1, ActionPolicy::rule, nullptr);
    REQUIRE(create.has_value());
    CHECK(create->action == bus::ActionType::CREATE_VIDEO);

    // Boredom limit forces EXIT: five consecutive skips.
    for (int i = 0; i < 5; ++i) {
        bus.publish(2, bus::EventType::VIDEO_SKIPPED, "interaction",
                    watched(1, 11, 1.0, 0.05, true));
    }
    auto exit_choice = twin.select_action(1, 3, ActionPolicy::rule, nullptr);
    REQUIRE(exit_choice.has_value());
    CHECK(exit_choice->action == bus::ActionType::EXIT);
}

TEST_CASE("select_action: energy depletion forces EXIT") {
    std::vector<AgentProfile> agents = {make_creator(0, CreatorTier::consumer, 0.0)};
    UserTwin twin(agents, PolicyConfig{}, 42);
    bus::EventBus bus;
    twin.attach(bus, nullptr);

    start_session(bus, 0, "5");
    for (int i = 0; i < 10; ++i) {
        bus.publish(1, bus::EventType::VIDEO_WATCHED, "interaction",
                    watched(0, 5, 40.0, 1.0, false));
    }
    CHECK(twin.session(0).energy_level < 0.05);
    auto choice = twin.select_action(0, 2, ActionPolicy::rule, nullptr);
    REQUIRE(choice.has_value());
    CHECK(choice->action == bus::ActionType::EXIT);
}

TEST_CASE("llm action policy falls back to the rule decision") {
    std::vector<AgentProfile> agents = {make_creator(0, CreatorTier::consumer, 0.0)};
    PolicyConfig policy;
    policy.session_start_prob = 1.0;
    UserTwin twin(agents, policy, 42);
    bus::EventBus bus;
    twin.attach(bus, nullptr);
    start_session(bus, 0, "21,22");

    decision::DecisionConfig cfg;
    decision::DecisionOptimizer optimizer(cfg, nullptr, nullptr, 42); // surrogate-only
    auto choice = twin.select_action(0, 1, ActionPolicy::llm, &optimizer);
    REQUIRE(choice.has_value());
    CHECK(choice->action == bus::ActionType::WATCH_VIDEO); // surrogate applies the rule policy
}

TEST_CASE("persona application is deterministic and stays in range") {
    AgentProfile profile = make_creator(3, CreatorTier::elite, 0.04);
    profile.attention_span = 30.0;
    decision::json persona = decision::surrogate_persona("elite", "COMEDY");

    AgentProfile a = profile;
    AgentProfile b = profile;
    apply_persona(a, persona);
    apply_persona(b, persona);
    CHECK(a.attention_span == b.attention_span);
    CHECK(a.propensities.like == b.propensities.like);
    CHECK(a.attention_span >= 0.1);
    CHECK(a.attention_span <= 120.0);
    CHECK(a.demographics.count("bio") == 1);

    decision::json malformed = persona;
    malformed.erase("core_traits");
    CHECK_THROWS_AS(apply_persona(a, malformed), PayloadError);
}

TEST_CASE("llm persona source perturbs elite attributes relative to template source") {
    decision::DecisionConfig cfg;
    decision::DecisionOptimizer optimizer(cfg, nullptr, nullptr, 42);
    auto with_personas = init_population(200, TierConfig{}, PersonaSource::llm, &optimizer, 42);
    auto plain = init_population(200, TierConfig{}, PersonaSource::template_bank, nullptr, 42);
    bool any_changed = false;
    for (std::size_t i = 0; i < plain.size(); ++i) {
        CHECK(with_personas[i].creator_tier == plain[i].creator_tier);
        if (with_personas[i].creator_tier == CreatorTier::elite ||
            with_personas[i].creator_tier == CreatorTier::active) {
            if (with_personas[i].attention_span != plain[i].attention_span) any_changed = true;
        } else {
            CHECK(with_personas[i].attention_span == plain[i].attention_span);
        }
    }
    CHECK(any_changed);
}

TEST_CASE("social graph: consumers never attract follows beyond creators") {
    auto agents = init_population(400, TierConfig{}, PersonaSource::template_bank, nullptr, 11);
    UserTwin twin(agents, PolicyConfig{}, 11);
    twin.init_social_graph();
    for (const auto& a : agents) {
        for (int64_t target : twin.following(a.agent_id)) {
            CHECK(twin.agent(target).creator_tier != CreatorTier::consumer);
            CHECK(target != a.agent_id);
        }
    }
}

TEST_CASE("state hash reflects preference changes") {
    std::vector<AgentProfile> agents = {make_creator(0, CreatorTier::consumer, 0.0)};
    UserTwin twin(agents, PolicyConfig{}, 42);
    bus::EventBus bus;
    content::ContentStore store(42);
    store.attach(bus);
    twin.attach(bus, &store);

    uint64_t before = twin.state_hash();
    content::ContentProfile p =
        content::create_content({1, "elite", "DANCE"}, 11, 0, {},
                                content::CaptionSource::template_bank, nullptr, 42);
    bus.publish(0, bus::EventType::CONTENT_CREATED, "platform", content::content_to_payload(p));
    start_session(bus, 0, "11");
    bus.publish(1, bus::EventType::VIDEO_WATCHED, "interaction", watched(0, 11, 20.0, 0.95, false));
    CHECK(twin.state_hash() != before);
}
