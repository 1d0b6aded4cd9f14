#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "svsim/platform/cascade_tracker.hpp"
#include "svsim/platform/governance.hpp"
#include "svsim/platform/trend_tracker.hpp"

using namespace svsim;
using namespace svsim::platform;

namespace {

TrendState tag_state(const std::string& tag, double velocity) {
    TrendState t;
    t.key = "tag/" + tag;
    t.velocity = velocity;
    return t;
}

bus::Payload audit_payload(const GovernanceAction& a) {
    return bus::Payload{{"kind", std::string(to_string(a.kind))},
                        {"target", a.target},
                        {"magnitude", a.magnitude},
                        {"guard_result", a.guard_passed ? "pass" : "fail"},
                        {"reason", a.reason},
                        {"audit_id", a.audit_id}};
}

} // namespace

TEST_CASE("lifecycle classification fixtures") {
    CHECK(classify_lifecycle({1, 2, 4, 8}, 3) == Lifecycle::emergence);
    CHECK(classify_lifecycle({8, 4, 2, 1}, 3) == Lifecycle::decline);
    CHECK(classify_lifecycle({5, 5, 5, 5}, 3) == Lifecycle::peak);
    CHECK(classify_lifecycle({0, 0, 0, 5}, 3) == Lifecycle::emergence); // fresh burst
    CHECK(classify_lifecycle({1, 8, 4, 6}, 3) == Lifecycle::peak);      // mixed movement
    CHECK(classify_lifecycle({3}, 3) == Lifecycle::peak);               // not enough history

    // Pure function of the window: same counts, same label.
    std::vector<double> window{2, 3, 5, 9};
    CHECK(classify_lifecycle(window, 3) == classify_lifecycle(window, 3));
}

TEST_CASE("trend tracker: velocity equals brute-force recount") {
    TrendConfig config;
    config.window_epochs = 4;
    TrendTracker tracker(config);
    // Epoch counts: 1, 2, 4, 8 for one tag.
    int64_t step = 10;
    std::map<int64_t, double> fixture{{7, 1}, {8, 2}, {9, 4}, {10, 8}};
    for (const auto& [epoch, count] : fixture) {
        for (int i = 0; i < count; ++i) tracker.record("tag/riser", epoch);
    }
    double expect = (1 + 2 + 4 + 8) / 4.0;
    CHECK(tracker.velocity("tag/riser", step) == doctest::Approx(expect));
    CHECK(tracker.velocity("tag/riser", step - 1) == doctest::Approx((1 + 2 + 4) / 4.0));
    CHECK(tracker.velocity("tag/missing", step) == 0.0);

    auto states = tracker.update_trends(step);
    REQUIRE(states.size() == 1);
    CHECK(states[0].lifecycle == Lifecycle::emergence);
    CHECK(states[0].window_counts == std::vector<double>{1, 2, 4, 8});

    // Keys with no interactions in the window disappear.
    TrendTracker empty_window(config);
    empty_window.record("tag/old", 1);
    CHECK(empty_window.update_trends(100).empty());
}

TEST_CASE("trend tracker: gate crossings and top hashtags") {
    TrendConfig config;
    config.window_epochs = 2;
    TrendTracker tracker(config);
    for (int i = 0; i < 300; ++i) tracker.record("tag/hot", 5);
    for (int i = 0; i < 10; ++i) tracker.record("tag/cool", 5);

    // velocity(hot, 5) = 300/2 = 150 > 100; at step 4 it was 0.
    auto crossings = tracker.gate_crossings(5, 100.0);
    REQUIRE(crossings.size() == 1);
    CHECK(crossings[0] == "tag/hot");
    CHECK(tracker.gate_crossings(6, 100.0).empty()); // still above, no new crossing

    auto top = tracker.top_hashtags(5, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0] == "hot");
    CHECK(top[1] == "cool");

    nlohmann::json series = tracker.series_json(5, 4, "tag/");
    CHECK(series.contains("hot"));
    CHECK(series["hot"].size() == 4);
}

TEST_CASE("cascade tracker: chain and star fixtures") {
    CascadeTracker tracker;
    // Single share: depth 1, branching 1.
    tracker.add_share(1, 100, -1, 0);
    CascadeMetrics single = tracker.metrics(1);
    CHECK(single.depth == 1);
    CHECK(single.branching_factor == doctest::Approx(1.0));

    // Chain: root -> A -> B gives depth 2.
    tracker.add_share(2, 100, -1, 0);
    tracker.add_share(2, 200, 100, 1);
    CHECK(tracker.metrics(2).depth == 2);

    // Star: four children of the root, branching 4, depth 1.
    for (int64_t u = 1; u <= 4; ++u) tracker.add_share(3, u, -1, 0);
    CascadeMetrics star = tracker.metrics(3);
    CHECK(star.depth == 1);
    CHECK(star.branching_factor == doctest::Approx(4.0));
    CHECK(star.node_count == 4);

    // Unknown parent attaches to the root, flagged.
    tracker.add_share(4, 10, 999, 0);
    CHECK(tracker.metrics(4).depth == 1);
    CHECK(tracker.nodes(4).at(10).orphan_reattached);
}

TEST_CASE("cascade tracker: incremental metrics equal from-scratch recomputation") {
    CascadeTracker tracker;
    RngStream rng(19, "cascade-fuzz", {0});
    std::vector<int64_t> sharers;
    for (int i = 0; i < 100; ++i) {
        int64_t user = 1000 + i;
        int64_t parent = sharers.empty() || rng.bernoulli(0.3)
                             ? -1
                             : sharers[rng.next_below(sharers.size())];
        tracker.add_share(7, user, parent, i);
        sharers.push_back(user);

        CascadeMetrics incremental = tracker.metrics(7);
        CascadeMetrics oracle = CascadeTracker::recompute(7, tracker.nodes(7));
        REQUIRE(incremental.depth == oracle.depth);
        REQUIRE(incremental.node_count == oracle.node_count);
        REQUIRE(incremental.branching_factor == doctest::Approx(oracle.branching_factor));
    }
}

TEST_CASE("control step: S0 always empty") {
    GovernanceController controller(GovernanceGoals{}, nullptr);
    TelemetrySnapshot snapshot;
    snapshot.step = 5;
    snapshot.trends = {tag_state("hot", 500.0)};
    snapshot.forecasts = {{"riser", 0.95, "fixture"}};
    CHECK(controller.control_step(snapshot, Strategy::S0).empty());
}

TEST_CASE("control step: S1 boosts exactly the above-gate hashtags") {
    GovernanceController controller(GovernanceGoals{}, nullptr);
    TelemetrySnapshot snapshot;
    snapshot.step = 5;
    snapshot.trends = {tag_state("hot", 120.0), tag_state("warm", 100.0),
                       tag_state("cold", 5.0)};
    auto actions = controller.control_step(snapshot, Strategy::S1);
    REQUIRE(actions.size() == 1); // 100.0 is not strictly above the gate
    CHECK(actions[0].target == "hot");
    CHECK(actions[0].kind == ActionKind::boost);
}

TEST_CASE("control step: S2 pre-boosts confident forecasts below the velocity gate") {
    GovernanceController controller(GovernanceGoals{}, nullptr);
    TelemetrySnapshot snapshot;
    snapshot.step = 5;
    snapshot.trends = {tag_state("quiet", 20.0)};
    snapshot.forecasts = {{"quiet", 0.9, "fixture"}, {"weak", 0.5, "fixture"}};

    auto s1 = controller.control_step(snapshot, Strategy::S1);
    CHECK(s1.empty());
    auto s2 = controller.control_step(snapshot, Strategy::S2);
    REQUIRE(s2.size() == 1);
    CHECK(s2[0].target == "quiet"); // confidence 0.9 >= 0.7; 0.5 is below
}

TEST_CASE("control step honors the concurrent boost cap") {
    GovernanceGoals goals;
    goals.max_concurrent_boosts = 3;
    GovernanceController controller(goals, nullptr);
    TelemetrySnapshot snapshot;
    snapshot.step = 5;
    for (int i = 0; i < 8; ++i) {
        snapshot.trends.push_back(tag_state("t" + std::to_string(i), 200.0 + i));
    }
    auto actions = controller.control_step(snapshot, Strategy::S1);
    CHECK(actions.size() == 3);
    CHECK(actions[0].target == "t7"); // strongest velocity first
}

TEST_CASE("guarded execution: bounds, unknown targets, cap; audit trail") {
    PlatformRegistry registry;
    GovernanceGoals goals;
    GovernanceController controller(goals, &registry);
    bus::EventBus bus;
    controller.attach(bus);
    std::set<std::string> known{"hot", "quiet"};

    GovernanceAction ok;
    ok.kind = ActionKind::boost;
    ok.target = "hot";
    ok.magnitude = 2.0;
    ok = controller.guarded_execute(ok, known, 5);
    CHECK(ok.guard_passed);
    bus.publish(5, bus::EventType::GOVERNANCE_ACTION_APPLIED, "platform", audit_payload(ok));
    CHECK(controller.multiplier_for("hot", 6) == 2.0);
    CHECK(controller.multiplier_for("hot", 5 + goals.boost_duration) == 1.0); // expired

    GovernanceAction too_big;
    too_big.kind = ActionKind::boost;
    too_big.target = "quiet";
    too_big.magnitude = 50.0;
    too_big = controller.guarded_execute(too_big, known, 5);
    CHECK_FALSE(too_big.guard_passed);
    bus.publish(5, bus::EventType::GOVERNANCE_ACTION_APPLIED, "platform", audit_payload(too_big));
    CHECK(controller.multiplier_for("quiet", 6) == 1.0); // rejected: no state change

    GovernanceAction ghost;
    ghost.kind = ActionKind::boost;
    ghost.target = "nonexistent";
    ghost.magnitude = 2.0;
    ghost = controller.guarded_execute(ghost, known, 5);
    CHECK_FALSE(ghost.guard_passed);
    bus.publish(5, bus::EventType::GOVERNANCE_ACTION_APPLIED, "platform", audit_payload(ghost));

    // Every execution wrote an audit record, pass or fail.
    CHECK(registry.ledger("governance_audit").size() == 3);
    CHECK(registry.ledger("governance_audit")[0].at("guard_result") == "pass");
    CHECK(registry.ledger("governance_audit")[1].at("guard_result") == "fail");
    CHECK(registry.ledger("governance_audit")[2].at("guard_result") == "fail");

    // Audit replay rebuilds the applied-multiplier ledger exactly.
    GovernanceController fresh(goals, nullptr);
    bus::EventBus bus2;
    fresh.attach(bus2);
    for (const auto& record : registry.ledger("governance_audit")) {
        bus2.publish(5, bus::EventType::GOVERNANCE_ACTION_APPLIED, "platform", record);
    }
    CHECK(fresh.boosts().size() == controller.boosts().size());
    CHECK(fresh.multiplier_for("hot", 6) == 2.0);
    CHECK(fresh.state_hash() == controller.state_hash());
}

TEST_CASE("suppress applies the reciprocal multiplier") {
    GovernanceController controller(GovernanceGoals{}, nullptr);
    bus::EventBus bus;
    controller.attach(bus);
    GovernanceAction suppress;
    suppress.kind = ActionKind::suppress;
    suppress.target = "noisy";
    suppress.magnitude = 2.0;
    suppress = controller.guarded_execute(suppress, {"noisy"}, 3);
    REQUIRE(suppress.guard_passed);
    bus.publish(3, bus::EventType::GOVERNANCE_ACTION_APPLIED, "platform", audit_payload(suppress));
    CHECK(controller.multiplier_for("noisy", 4) == doctest::Approx(0.5));
    CHECK(controller.content_multiplier({"noisy", "other"}, 4) == doctest::Approx(0.5));
}
