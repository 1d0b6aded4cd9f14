#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>

#include "svsim/bus/event_bus.hpp"
#include "svsim/decision/budget.hpp"
#include "svsim/decision/cache.hpp"
#include "svsim/decision/optimizer.hpp"
#include "svsim/decision/surrogates.hpp"
#include "svsim/decision/types.hpp"
#include "svsim/errors.hpp"

using namespace svsim;
using namespace svsim::decision;

namespace {

DecisionRequest persona_request(const std::string& tier = "elite",
                                const std::string& domain = "COMEDY") {
    DecisionRequest r;
    r.task = Task::PERSONA;
    r.prompt_payload = {{"tier", tier}, {"domain", domain}};
    r.requester = "user/1";
    return r;
}

DecisionRequest comment_request(int64_t content = 7) {
    DecisionRequest r;
    r.task = Task::COMMENT;
    r.prompt_payload = {{"content_id", content}};
    r.requester = "interaction/1";
    return r;
}

DecisionOptimizer make_optimizer(DecisionConfig cfg, bool with_client, bus::EventBus* bus = nullptr,
                                 FixtureClient** out_client = nullptr) {
    std::unique_ptr<LiveClient> client;
    if (with_client) {
        auto fixture = std::make_unique<FixtureClient>();
        if (out_client) *out_client = fixture.get();
        client = std::move(fixture);
    }
    return DecisionOptimizer(std::move(cfg), std::move(client), bus, 42);
}

} // namespace

TEST_CASE("budget arithmetic: 400 calls at 0.02 against a cap of 10") {
    BudgetTracker budget(10.0);
    for (int i = 0; i < 400; ++i) {
        budget.record(Task::CAPTION, Tier::live, 0.02);
    }
    CHECK(budget.spent_total() == doctest::Approx(8.0));
    CHECK(budget.utilization() == doctest::Approx(0.80));
    CHECK(budget.spent_by_task(Task::CAPTION) == doctest::Approx(8.0));
    CHECK(budget.spent_by_tier(Tier::live) == doctest::Approx(8.0));
}

TEST_CASE("budget: cached and surrogate are free; cap is never breached") {
    BudgetTracker budget(1.0);
    budget.record(Task::PERSONA, Tier::cached, 0.0);
    budget.record(Task::PERSONA, Tier::surrogate, 0.0);
    CHECK(budget.spent_total() == 0.0);
    CHECK_THROWS_AS(budget.record(Task::PERSONA, Tier::cached, 0.5), DomainError);
    CHECK_THROWS_AS(budget.record(Task::PERSONA, Tier::live, 1.5), DomainError);
    CHECK_THROWS_AS(budget.record(Task::PERSONA, Tier::live, -0.1), DomainError);
    budget.record(Task::PERSONA, Tier::live, 1.0);
    CHECK(budget.spent_total() == doctest::Approx(1.0));
    CHECK_FALSE(budget.can_spend(0.01));
}

TEST_CASE("cache key is a pure function; any component change gives a new key") {
    DecisionRequest a = persona_request();
    DecisionRequest b = persona_request();
    CHECK(cache_key(a) == cache_key(b));

    DecisionRequest other_payload = persona_request("elite", "DANCE");
    CHECK(cache_key(a) != cache_key(other_payload));

    DecisionRequest other_model = persona_request();
    other_model.model_id = "gpt-3.5-turbo";
    CHECK(cache_key(a) != cache_key(other_model));

    DecisionRequest other_temp = persona_request();
    other_temp.temperature = 0.2;
    CHECK(cache_key(a) != cache_key(other_temp));
}

TEST_CASE("surrogate outputs validate against the task schemas, exhaustively") {
    const std::vector<std::string> tiers = {"elite", "active", "casual", "consumer"};
    const std::vector<std::string> domains = {"DANCE",     "COMEDY", "EDUCATIONAL", "GAMING",
                                              "LIFESTYLE", "MUSIC",  "PETS",        "DIY_CRAFTS",
                                              "TECH",      "BEAUTY", "FITNESS",     "NEWS"};
    for (const auto& tier : tiers) {
        for (const auto& domain : domains) {
            json persona = surrogate_persona(tier, domain);
            CHECK_NOTHROW(validate_result(Task::PERSONA, persona));
            CHECK(persona["core_traits"].size() == 5);
        }
    }
    RngStream rng(1, "test", {0});
    for (const auto& domain : domains) {
        CHECK_NOTHROW(validate_result(Task::CAPTION, surrogate_caption(domain, {"riser"}, rng)));
        json plan = surrogate_campaign(domain, 17).to_json();
        CHECK_NOTHROW(validate_result(Task::CAMPAIGN, plan));
    }
    for (int i = 0; i < 50; ++i) {
        CHECK_NOTHROW(validate_result(Task::COMMENT, surrogate_comment(rng)));
    }
}

TEST_CASE("surrogate campaign: fixed three-day progression") {
    CampaignPlan plan = surrogate_campaign("DIY_CRAFTS", 3);
    REQUIRE(plan.entries.size() == 3);
    std::set<int> offsets;
    for (const auto& e : plan.entries) offsets.insert(e.day_offset);
    CHECK(offsets == std::set<int>{0, 1, 2});
    CHECK(plan.entries[0].category == "DIY_CRAFTS");
    CHECK(plan.entries[0].cta == "follow");
    CHECK(plan.entries[2].cta.find("gift") != std::string::npos); // conversion-typed close
    CHECK_FALSE(plan.entries[2].live_slot.empty());

    // Deterministic: same creator twice gives the identical plan.
    CHECK(surrogate_campaign("DIY_CRAFTS", 3).to_json() == plan.to_json());
}

TEST_CASE("surrogate caption includes the trending tag") {
    RngStream rng(9, "caption", {1});
    json caption = surrogate_caption("DANCE", {"#Sustainable Living"}, rng);
    bool found = false;
    for (const auto& h : caption["hashtags"]) {
        if (h.get<std::string>() == "sustainable_living") found = true;
    }
    CHECK(found);
}

TEST_CASE("surrogate comment text comes from the template bank") {
    RngStream rng(5, "comment", {2});
    for (int i = 0; i < 20; ++i) {
        json c = surrogate_comment(rng);
        const auto& bank = comment_template_bank();
        CHECK(std::find(bank.begin(), bank.end(), c["text"].get<std::string>()) != bank.end());
    }
}

TEST_CASE("surrogate trend: flat series gives nothing, risers are emitted in [0,1]") {
    json flat = {{"steady", {5, 5, 5, 5}}};
    CHECK(surrogate_trend(flat).empty());

    json series = {{"riser", {1, 2, 4, 8}}, {"faller", {9, 6, 3, 1}}, {"steady", {4, 4, 4, 4}}};
    auto forecasts = surrogate_trend(series);
    REQUIRE(forecasts.size() == 1);
    CHECK(forecasts[0].hashtag == "riser");
    CHECK(forecasts[0].confidence >= 0.0);
    CHECK(forecasts[0].confidence <= 1.0);
    CHECK(forecasts[0].confidence == doctest::Approx(7.0 / 8.0));
}

TEST_CASE("canonical hashtag form") {
    CHECK(canonical_hashtag("#Sustainable Living") == "sustainable_living");
    CHECK(canonical_hashtag("FYP") == "fyp");
    CHECK(canonical_hashtag("#dance") == "dance");
}

TEST_CASE("routing: cache first, then live, degrading to surrogate by threshold") {
    DecisionConfig cfg;
    cfg.budget_cap = 10.0;
    cfg.price_per_call = {{"gpt-4-turbo", 1.0}, {"gpt-3.5-turbo", 1.0}};
    FixtureClient* fixture = nullptr;
    DecisionOptimizer opt = make_optimizer(cfg, true, nullptr, &fixture);

    DecisionRequest req = persona_request();
    CHECK(opt.route(req) == Tier::live);

    DecisionResult live = opt.submit(req);
    CHECK(live.tier == Tier::live);
    CHECK(live.cost == doctest::Approx(1.0));
    CHECK(opt.budget().spent_total() == doctest::Approx(1.0));

    // Identical request now routes cached at zero incremental spend.
    CHECK(opt.route(req) == Tier::cached);
    DecisionResult cached = opt.submit(req);
    CHECK(cached.tier == Tier::cached);
    CHECK(cached.from_cache);
    CHECK(cached.payload == live.payload);
    CHECK(opt.budget().spent_total() == doctest::Approx(1.0));
}

TEST_CASE("degradation thresholds: COMMENT above 80%, PERSONA above 95%") {
    DecisionConfig cfg;
    cfg.budget_cap = 100.0;
    cfg.comment_live_allowed = true; // exercise the comment threshold itself
    cfg.price_per_call = {{"gpt-4-turbo", 1.0}, {"gpt-3.5-turbo", 1.0}};
    FixtureClient* fixture = nullptr;
    DecisionOptimizer opt = make_optimizer(cfg, true, nullptr, &fixture);

    // Consume 81% of the budget with distinct caption requests.
    for (int i = 0; i < 81; ++i) {
        DecisionRequest r;
        r.task = Task::CAPTION;
        r.prompt_payload = {{"archetype", "DANCE"}, {"nonce", i}};
        CHECK(opt.submit(r).tier == Tier::live);
    }
    CHECK(opt.budget().utilization() == doctest::Approx(0.81));

    CHECK(opt.route(comment_request()) == Tier::surrogate);     // 0.81 > 0.80
    CHECK(opt.route(persona_request()) == Tier::live);          // 0.81 < 0.95

    // Push past 95%, distinct persona requests stay live until the threshold.
    for (int i = 0; i < 15; ++i) {
        DecisionRequest r = persona_request("elite", "DANCE");
        r.prompt_payload["nonce"] = i;
        opt.submit(r);
    }
    CHECK(opt.budget().utilization() == doctest::Approx(0.96));
    DecisionRequest fresh = persona_request("casual", "PETS");
    CHECK(opt.route(fresh) == Tier::surrogate); // 0.96 > 0.95
    DecisionResult degraded = opt.submit(fresh);
    CHECK(degraded.tier == Tier::surrogate);
    CHECK_NOTHROW(validate_result(Task::PERSONA, degraded.payload));
}

TEST_CASE("routing is monotone in utilization") {
    // For a fixed request and cache state, raising utilization never moves the
    // tier from surrogate back toward live.
    auto tier_rank = [](Tier t) { return t == Tier::live ? 0 : t == Tier::cached ? 1 : 2; };
    DecisionRequest req = persona_request("active", "TECH");
    int prev_rank = -1;
    for (int pct = 0; pct <= 100; pct += 5) {
        DecisionConfig cfg;
        cfg.budget_cap = 100.0;
        cfg.price_per_call = {{"gpt-4-turbo", 1.0}, {"gpt-3.5-turbo", 1.0}};
        FixtureClient* fixture = nullptr;
        DecisionOptimizer opt = make_optimizer(cfg, true, nullptr, &fixture);
        for (int i = 0; i < pct; ++i) {
            DecisionRequest filler;
            filler.task = Task::CAPTION;
            filler.prompt_payload = {{"archetype", "PETS"}, {"nonce", i}};
            opt.submit(filler);
        }
        int rank = tier_rank(opt.route(req));
        CHECK(rank >= prev_rank);
        prev_rank = rank;
    }
}

TEST_CASE("budget exceeded: live denied before breach, event published once") {
    DecisionConfig cfg;
    cfg.budget_cap = 2.5;
    cfg.default_threshold = 1.0; // isolate the cap check from soft thresholds
    cfg.persona_threshold = 1.0;
    cfg.price_per_call = {{"gpt-4-turbo", 1.0}, {"gpt-3.5-turbo", 1.0}};
    bus::EventBus bus;
    FixtureClient* fixture = nullptr;
    DecisionOptimizer opt = make_optimizer(cfg, true, &bus, &fixture);

    for (int i = 0; i < 4; ++i) {
        DecisionRequest r = persona_request();
        r.prompt_payload["nonce"] = i;
        DecisionResult res = opt.submit(r);
        CHECK(opt.budget().spent_total() <= opt.budget().cap() + 1e-12);
        if (i < 2) CHECK(res.tier == Tier::live);
        if (i >= 2) CHECK(res.tier == Tier::surrogate); // third call cannot fit
    }
    int exceeded_events = 0;
    for (const auto& e : bus.log()) {
        if (e.type == bus::EventType::BUDGET_EXCEEDED) ++exceeded_events;
    }
    CHECK(exceeded_events == 1);
}

TEST_CASE("malformed and failed live responses fall through to the surrogate") {
    DecisionConfig cfg;
    cfg.budget_cap = 10.0;
    cfg.price_per_call = {{"gpt-4-turbo", 1.0}, {"gpt-3.5-turbo", 1.0}};
    FixtureClient* fixture = nullptr;
    DecisionOptimizer opt = make_optimizer(cfg, true, nullptr, &fixture);
    fixture->malform_task(Task::PERSONA);
    fixture->fail_task(Task::CAMPAIGN);

    DecisionResult persona = opt.submit(persona_request());
    CHECK(persona.tier == Tier::surrogate);
    CHECK_NOTHROW(validate_result(Task::PERSONA, persona.payload));
    CHECK(opt.budget().spent_total() == doctest::Approx(1.0)); // malformed response still billed

    DecisionRequest camp;
    camp.task = Task::CAMPAIGN;
    camp.prompt_payload = {{"creator_id", 4}, {"domain", "PETS"}};
    DecisionResult plan = opt.submit(camp);
    CHECK(plan.tier == Tier::surrogate);
    CHECK_NOTHROW(validate_result(Task::CAMPAIGN, plan.payload));
    CHECK(opt.budget().spent_total() == doctest::Approx(1.0)); // transport failure is free
}

TEST_CASE("batch flush: 120 queued requests group into 50/50/20") {
    DecisionConfig cfg;
    cfg.budget_cap = 100.0;
    cfg.price_per_call = {{"gpt-4-turbo", 0.1}, {"gpt-3.5-turbo", 0.1}};
    FixtureClient* fixture = nullptr;
    DecisionOptimizer opt = make_optimizer(cfg, true, nullptr, &fixture);

    for (int i = 0; i < 120; ++i) {
        DecisionRequest r;
        r.task = Task::CAPTION;
        r.prompt_payload = {{"archetype", "MUSIC"}, {"nonce", i}};
        opt.enqueue(std::move(r), 0);
    }
    auto results = opt.flush(0, true);
    REQUIRE(results.size() == 120);
    CHECK(fixture->batch_sizes == std::vector<std::size_t>{50, 50, 20});
    for (int i = 0; i < 120; ++i) {
        // Demultiplexed in submission order: nonce i belongs to slot i.
        CHECK(results[i].payload["description"].get<std::string>().find("[fixture]") !=
              std::string::npos);
    }
}

TEST_CASE("batch flush: window expiry flushes a small group") {
    DecisionConfig cfg;
    cfg.flush_window_steps = 1;
    cfg.price_per_call = {{"gpt-4-turbo", 0.1}, {"gpt-3.5-turbo", 0.1}};
    FixtureClient* fixture = nullptr;
    DecisionOptimizer opt = make_optimizer(cfg, true, nullptr, &fixture);
    for (int i = 0; i < 3; ++i) {
        DecisionRequest r;
        r.task = Task::CAPTION;
        r.prompt_payload = {{"archetype", "PETS"}, {"nonce", i}};
        opt.enqueue(std::move(r), 0);
    }
    CHECK(opt.flush(0).empty()); // window not expired, batch not full
    auto results = opt.flush(1); // one step later the window expires
    CHECK(results.size() == 3);
    CHECK(fixture->batch_sizes == std::vector<std::size_t>{3});
}

TEST_CASE("disabled live tier: everything is surrogate with zero spend") {
    DecisionConfig cfg;
    DecisionOptimizer opt = make_optimizer(cfg, false);
    for (int i = 0; i < 10; ++i) {
        DecisionRequest r = persona_request();
        r.prompt_payload["nonce"] = i;
        DecisionResult res = opt.submit(r);
        CHECK(res.tier == Tier::surrogate);
    }
    CHECK(opt.submit(comment_request()).tier == Tier::surrogate);
    CHECK(opt.budget().spent_total() == 0.0);
}

TEST_CASE("identical surrogate requests give identical results") {
    DecisionConfig cfg;
    DecisionOptimizer opt = make_optimizer(cfg, false);
    DecisionResult a = opt.submit(comment_request(12));
    DecisionResult b = opt.submit(comment_request(12));
    CHECK(a.payload == b.payload);
}

TEST_CASE("disk cache persists across optimizer instances") {
    std::string path = (std::filesystem::temp_directory_path() / "svsim_cache_test.jsonl").string();
    std::remove(path.c_str());

    DecisionConfig cfg;
    cfg.cache_path = path;
    cfg.budget_cap = 10.0;
    cfg.price_per_call = {{"gpt-4-turbo", 1.0}, {"gpt-3.5-turbo", 1.0}};
    {
        FixtureClient* fixture = nullptr;
        DecisionOptimizer first = make_optimizer(cfg, true, nullptr, &fixture);
        CHECK(first.submit(persona_request()).tier == Tier::live);
        CHECK(first.budget().spent_total() == doctest::Approx(1.0));
    }
    {
        FixtureClient* fixture = nullptr;
        DecisionOptimizer second = make_optimizer(cfg, true, nullptr, &fixture);
        DecisionResult res = second.submit(persona_request());
        CHECK(res.tier == Tier::cached);               // warm start from disk
        CHECK(second.budget().spent_total() == 0.0);   // zero incremental spend
        CHECK(fixture->calls == 0);
    }
    std::remove(path.c_str());
}

TEST_CASE("action selection surrogate follows the rule policy") {
    CHECK(surrogate_action({{"energy", 0.01}, {"boredom", 0}, {"feed_remaining", 5}})["action"] ==
          "EXIT");
    CHECK(surrogate_action({{"energy", 0.9}, {"boredom", 7}, {"feed_remaining", 5}})["action"] ==
          "EXIT");
    CHECK(surrogate_action({{"energy", 0.9},
                            {"boredom", 0},
                            {"feed_remaining", 5},
                            {"creation_probability", 0.5},
                            {"u_create", 0.1}})["action"] == "CREATE_VIDEO");
    CHECK(surrogate_action({{"energy", 0.9}, {"boredom", 0}, {"feed_remaining", 5}})["action"] ==
          "WATCH_VIDEO");
    CHECK(surrogate_action({{"energy", 0.9}, {"boredom", 0}, {"feed_remaining", 0}})["action"] ==
          "REFRESH");
}
