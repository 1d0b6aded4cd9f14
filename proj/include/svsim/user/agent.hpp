/**
 * User twin domain state: static persona-derived attributes, the evolving
 * 50-dim preference vector driven by the feedback learner, Ebbinghaus-style
 * memory traces with a spacing effect, and per-session scroll state.
 */

#ifndef SVSIM_USER_AGENT_HPP
#define SVSIM_USER_AGENT_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svsim/bus/action_type.hpp"
#include "svsim/dense_vector.hpp"

namespace svsim::user {

enum class CreatorTier : uint8_t { elite, active, casual, consumer };

std::string_view to_string(CreatorTier tier);
CreatorTier tier_from_string(std::string_view name);

struct EngagementPropensities {
    double like = 0.0;
    double comment = 0.0;
    double share = 0.0;
    double gift = 0.0;
};

struct AgentProfile {
    int64_t agent_id = 0;
    std::map<std::string, std::string> demographics;
    CreatorTier creator_tier = CreatorTier::consumer;
    double attention_span = 20.0;    // seconds in [0.1, 120]
    double humor_affinity = 0.5;     // [0,1]
    double toxicity_tolerance = 0.5; // [0,1]
    std::string domain_expertise = "LIFESTYLE";
    EngagementPropensities propensities;
    double creation_probability = 0.0; // per step; consumers stay at 0
};

struct PreferenceState {
    DenseVector content_interests;             // 50-dim, entries clamped to [0,1]
    std::optional<DenseVector> visual_pref;    // 512, absent by default
    std::optional<DenseVector> audio_pref;     // 128
    std::optional<DenseVector> text_pref;      // 768

    static PreferenceState initial() {
        PreferenceState s;
        s.content_interests = DenseVector(50, 0.1);
        return s;
    }
};

struct MemoryTrace {
    std::string key;            // creator or topic identifier
    double strength = 0.0;      // S >= 0
    int64_t last_access_step = 0;
    int64_t access_count = 0;
    double tau = 24.0;          // decay constant, steps
};

struct SessionState {
    bool active = false;
    double energy_level = 1.0;
    int64_t boredom_counter = 0;
    std::deque<double> satisfaction_window; // recent satisfaction scores
    std::vector<int64_t> feed;              // served content ids
    std::size_t feed_cursor = 0;
    int64_t items_viewed = 0;
    int64_t started_step = 0;

    int64_t feed_remaining() const {
        return static_cast<int64_t>(feed.size()) - static_cast<int64_t>(feed_cursor);
    }
};

struct FeedbackParams {
    double positive_rate = 0.3;
    double negative_rate = 0.2;
    double positive_completion_threshold = 0.8; // completion above this nudges toward
    double negative_watch_threshold = 3.0;      // skip under this many seconds pushes away
};

/// Encounter summary the feedback learner consumes.
struct EncounterFeedback {
    double completion_rate = 0.0;
    double watch_time = 0.0;
    bool skipped = false;
    bool liked = false;
};

/**
 * Retention R = S * exp(-dt / tau_eff) with tau_eff = tau * (1 + kappa *
 * access_count): repeatedly retrieved traces decay more slowly.
 * Throws DomainError for tau <= 0 or dt < 0.
 */
double retention(const MemoryTrace& trace, int64_t now_step, double kappa = 0.2);

/// Engagement-weighted strength boost; SHARE outranks LIKE outranks a
/// passive watch. Access count always advances.
MemoryTrace reinforce_memory(MemoryTrace trace, bus::ActionType action, int64_t step);

/**
 * The feedback learner. A positive trigger (completion above threshold or a
 * like) moves preferences toward the content vector by positive_rate; an
 * immediate skip pushes away by negative_rate; anything else returns the
 * input unchanged, bit for bit. Results are clamped to [0,1].
 */
PreferenceState update_preferences(const PreferenceState& pref, const DenseVector& content_vector,
                                   const EncounterFeedback& outcome, const FeedbackParams& params);

} // namespace svsim::user

#endif // SVSIM_USER_AGENT_HPP
