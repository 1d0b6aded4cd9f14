#include "svsim/platform/governance.hpp"

#include <algorithm>

#include "svsim/errors.hpp"
#include "svsim/rng.hpp"

namespace svsim::platform {

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::S0: return "S0";
        case Strategy::S1: return "S1";
        case Strategy::S2: return "S2";
    }
    return "?";
}

Strategy strategy_from_string(std::string_view name) {
    if (name == "S0") return Strategy::S0;
    if (name == "S1") return Strategy::S1;
    if (name == "S2") return Strategy::S2;
    throw ConfigError("unknown governance strategy: " + std::string(name));
}

std::string_view to_string(ActionKind k) {
    switch (k) {
        case ActionKind::boost: return "boost";
        case ActionKind::suppress: return "suppress";
        case ActionKind::none: return "none";
    }
    return "?";
}

void GovernanceController::attach(bus::EventBus& bus) {
    if (registry_ != nullptr) {
        registry_->register_platform_handler("platform.governance");
    }
    bus.subscribe({bus::EventType::GOVERNANCE_ACTION_APPLIED, "platform.governance", 35},
                  [this](const bus::TypedEvent& e) { apply_audited(e); });
}

std::vector<GovernanceAction> GovernanceController::control_step(
    const TelemetrySnapshot& snapshot, Strategy strategy) const {
    std::vector<GovernanceAction> actions;
    if (strategy == Strategy::S0) {
        return actions; // no active governance interventions
    }

    std::set<std::string> proposed;
    auto already_boosted = [&](const std::string& tag) {
        auto it = boosts_.find(tag);
        return it != boosts_.end() && snapshot.step < it->second.expires_step;
    };

    // Reactive: hashtags whose current velocity strictly exceeds the gate,
    // strongest first.
    std::vector<const TrendState*> hot;
    for (const TrendState& t : snapshot.trends) {
        if (t.key.rfind("tag/", 0) != 0) continue;
        if (t.velocity > goals_.velocity_gate) hot.push_back(&t);
    }
    std::sort(hot.begin(), hot.end(), [](const TrendState* a, const TrendState* b) {
        if (a->velocity != b->velocity) return a->velocity > b->velocity;
        return a->key < b->key;
    });
    for (const TrendState* t : hot) {
        std::string tag = t->key.substr(4);
        if (already_boosted(tag) || !proposed.insert(tag).second) continue;
        GovernanceAction a;
        a.kind = ActionKind::boost;
        a.target = tag;
        a.magnitude = goals_.boost_magnitude;
        a.reason = "velocity " + std::to_string(t->velocity) + "/h above gate";
        actions.push_back(std::move(a));
    }

    if (strategy == Strategy::S2) {
        // Proactive: pre-boost forecast hits before their velocity crosses
        // the reactive gate.
        std::vector<decision::TrendForecast> forecasts = snapshot.forecasts;
        std::sort(forecasts.begin(), forecasts.end(),
                  [](const decision::TrendForecast& a, const decision::TrendForecast& b) {
                      if (a.confidence != b.confidence) return a.confidence > b.confidence;
                      return a.hashtag < b.hashtag;
                  });
        for (const decision::TrendForecast& f : forecasts) {
            if (f.confidence < goals_.confidence_gate) continue;
            if (already_boosted(f.hashtag) || !proposed.insert(f.hashtag).second) continue;
            GovernanceAction a;
            a.kind = ActionKind::boost;
            a.target = f.hashtag;
            a.magnitude = goals_.boost_magnitude;
            a.reason = "forecast confidence " + std::to_string(f.confidence);
            actions.push_back(std::move(a));
        }
    }

    // Goal constraint: the concurrent-boost cap covers active plus proposed.
    std::size_t active = active_boost_count(snapshot.step);
    std::size_t room = goals_.max_concurrent_boosts > active
                           ? goals_.max_concurrent_boosts - active
                           : 0;
    if (actions.size() > room) actions.resize(room);
    return actions;
}

GovernanceAction GovernanceController::guarded_execute(GovernanceAction action,
                                                       const std::set<std::string>& known_targets,
                                                       int64_t step) {
    action.audit_id = next_audit_id_++;
    std::string rejection;
    if (action.kind == ActionKind::none) {
        rejection = "no-op action";
    } else if (action.magnitude < goals_.magnitude_min ||
               action.magnitude > goals_.magnitude_max) {
        rejection = "magnitude outside bounds";
    } else if (known_targets.count(action.target) == 0) {
        rejection = "unknown target";
    } else if (action.kind == ActionKind::boost &&
               active_boost_count(step) >= goals_.max_concurrent_boosts) {
        rejection = "concurrent boost cap reached";
    }
    action.guard_passed = rejection.empty();
    if (!action.guard_passed) {
        action.reason += " | rejected: " + rejection;
    }
    return action;
}

void GovernanceController::apply_audited(const bus::TypedEvent& event) {
    // Audit record lands in the registry for every execution, pass or fail.
    std::string guard = event.payload.at("guard_result").get<std::string>();
    if (registry_ != nullptr) {
        registry_->commit("platform.governance",
                          Mutation::append_ledger("governance_audit", event.payload));
    }
    // Replaying the log must rebuild the audit counter as well.
    next_audit_id_ = std::max(next_audit_id_, event.payload.at("audit_id").get<int64_t>() + 1);
    if (guard != "pass") return;

    std::string kind = event.payload.at("kind").get<std::string>();
    std::string target = event.payload.at("target").get<std::string>();
    double magnitude = event.payload.at("magnitude").get<double>();
    if (kind == "suppress") magnitude = 1.0 / magnitude;
    boosts_[target] = ActiveBoost{magnitude, event.step + goals_.boost_duration};
}

double GovernanceController::multiplier_for(const std::string& hashtag, int64_t step) const {
    auto it = boosts_.find(hashtag);
    if (it == boosts_.end() || step >= it->second.expires_step) return 1.0;
    return it->second.multiplier;
}

double GovernanceController::content_multiplier(const std::vector<std::string>& hashtags,
                                                int64_t step) const {
    double m = 1.0;
    for (const std::string& tag : hashtags) {
        m *= multiplier_for(tag, step);
    }
    return std::clamp(m, 1.0 / goals_.magnitude_max, goals_.magnitude_max);
}

std::size_t GovernanceController::active_boost_count(int64_t step) const {
    std::size_t n = 0;
    for (const auto& [tag, boost] : boosts_) {
        if (step < boost.expires_step) ++n;
    }
    return n;
}

uint64_t GovernanceController::state_hash() const {
    uint64_t h = 1469598103934665603ULL;
    for (const auto& [tag, boost] : boosts_) {
        h = fnv1a(tag, h);
        h = fnv1a_u64(static_cast<uint64_t>(boost.expires_step), h);
        h = fnv1a_u64(static_cast<uint64_t>(boost.multiplier * 1e6), h);
    }
    h = fnv1a_u64(static_cast<uint64_t>(next_audit_id_), h);
    return mix64(h);
}

} // namespace svsim::platform
