#include "svsim/user/agent.hpp"

#include <algorithm>
#include <cmath>

#include "svsim/errors.hpp"

namespace svsim::user {

std::string_view to_string(CreatorTier tier) {
    switch (tier) {
        case CreatorTier::elite: return "elite";
        case CreatorTier::active: return "active";
        case CreatorTier::casual: return "casual";
        case CreatorTier::consumer: return "consumer";
    }
    return "?";
}

CreatorTier tier_from_string(std::string_view name) {
    if (name == "elite") return CreatorTier::elite;
    if (name == "active") return CreatorTier::active;
    if (name == "casual") return CreatorTier::casual;
    if (name == "consumer") return CreatorTier::consumer;
    throw ConfigError("unknown creator tier: " + std::string(name));
}

double retention(const MemoryTrace& trace, int64_t now_step, double kappa) {
    if (trace.tau <= 0.0) {
        throw DomainError("retention: tau must be positive");
    }
    if (now_step < trace.last_access_step) {
        throw DomainError("retention: now precedes last access");
    }
    double dt = static_cast<double>(now_step - trace.last_access_step);
    double tau_eff = trace.tau * (1.0 + kappa * static_cast<double>(trace.access_count));
    return trace.strength * std::exp(-dt / tau_eff);
}

MemoryTrace reinforce_memory(MemoryTrace trace, bus::ActionType action, int64_t step) {
    double boost = 0.1; // passive watch
    switch (action) {
        case bus::ActionType::SEND_GIFT: boost = 0.8; break;
        case bus::ActionType::SHARE: boost = 0.5; break;
        case bus::ActionType::COMMENT: boost = 0.4; break;
        case bus::ActionType::LIKE: boost = 0.3; break;
        case bus::ActionType::WATCH_VIDEO: boost = 0.1; break;
        default: boost = 0.1; break;
    }
    trace.strength += boost;
    trace.access_count += 1;
    trace.last_access_step = step;
    return trace;
}

PreferenceState update_preferences(const PreferenceState& pref, const DenseVector& content_vector,
                                   const EncounterFeedback& outcome,
                                   const FeedbackParams& params) {
    if (pref.content_interests.dim() != content_vector.dim()) {
        throw DomainError("update_preferences: dimension mismatch");
    }
    // An immediate skip wins over a nominal high completion on very short
    // clips; the two triggers cannot both fire.
    bool negative = outcome.skipped && outcome.watch_time < params.negative_watch_threshold;
    bool positive = !negative && (outcome.completion_rate > params.positive_completion_threshold ||
                                  outcome.liked);
    if (!positive && !negative) {
        return pref;
    }
    double rate = positive ? params.positive_rate : -params.negative_rate;
    PreferenceState next = pref;
    for (std::size_t i = 0; i < next.content_interests.dim(); ++i) {
        double p = next.content_interests[i];
        double c = content_vector[i];
        next.content_interests[i] = std::clamp(p + rate * (c - p), 0.0, 1.0);
    }
    return next;
}

} // namespace svsim::user
