/**
 * Interaction twin: the per-encounter behavior engine. Converts a served
 * impression into a realized outcome through four stages - hook gate,
 * interest matching, stochastic watch sampling, and engagement sampling.
 * Fully reentrant: nothing here mutates user, session, or content state;
 * all updates flow through the events the orchestrator publishes.
 */

#ifndef SVSIM_INTERACTION_ENCOUNTER_HPP
#define SVSIM_INTERACTION_ENCOUNTER_HPP

#include <optional>
#include <set>
#include <string>

#include "svsim/content/content_profile.hpp"
#include "svsim/rng.hpp"
#include "svsim/user/agent.hpp"

namespace svsim::interaction {

enum class MatchMode {
    fallback_projection, // preferences vs visual_embedding[:50] (default)
    compact,             // preferences vs the 50-dim compact content vector
};

struct BehaviorParams {
    // Skip logistic: sigma(alpha / hook + beta / attention + epsilon).
    double alpha = 0.5;
    double beta = 2.0;
    double epsilon_scale = 0.3; // epsilon ~ N(0, scale), drawn once per encounter
    double hook_window = 3.0;   // seconds; early skips land inside it

    // Watch model.
    double base_completion = 0.45;
    double lognormal_sigma = 0.35;
    double match_uplift = 0.25;

    // Interest matching.
    MatchMode match_mode = MatchMode::fallback_projection;
    double fusion_visual = 0.5;
    double fusion_audio = 0.2;
    double fusion_text = 0.3;

    // Engagement gain and monetization.
    double engagement_scale = 1.0; // global multiplier on propensities
    bool monetization_enabled = true;
    double follow_prob_base = 0.04;
    std::vector<double> gift_menu = {1.0, 5.0, 10.0, 50.0};
};

struct EncounterOutcome {
    bool hooked = false;
    bool skipped = false;
    double watch_time = 0.0;      // seconds
    double completion_rate = 0.0; // min(watch/duration, 1)
    std::set<std::string> engagements; // subset of like/share/comment/gift
    std::optional<std::string> comment_text;
    double gift_amount = 0.0;
    bool followed_creator = false;
    double match = 0.0; // diagnostic: interest-match score used
};

/**
 * P(skip) = sigma(alpha/hook + beta/attention + epsilon). Strictly decreasing
 * in hook strength and attention span. Zero or negative hook strength is
 * clamped to 0.01 rather than rejected.
 */
double skip_probability(double hook_strength, double attention_span, double epsilon,
                        const BehaviorParams& params);

/**
 * Interest match in [-1, 1]. When the user's modality slots are present the
 * per-modality cosines fuse with the configured weights; otherwise the
 * compact preference vector is compared against a truncated slice of the
 * content's visual embedding (or the compact content vector in compact mode).
 */
double interest_match(const user::PreferenceState& pref, const content::ContentProfile& profile,
                      const BehaviorParams& params);

/// Expected completion = clamp(base + uplift * match, 0.02, 1); the realized
/// completion disperses log-normally around it (mean-preserving), capped at 1.
/// watch_time = duration * completion.
std::pair<double, double> sample_watch(double duration, double match,
                                       const BehaviorParams& params, RngStream& rng);

/// Monotone engagement gain in [0, 1.5]; the per-action probability is
/// min(propensity * gain, 1).
double engagement_gain(double match, double completion);

/// Stage 4: independent draws per engagement type. Comment text comes from
/// the surrogate template bank; gifts only when monetization is enabled.
void sample_engagements(EncounterOutcome& outcome, const user::EngagementPropensities& props,
                        double match, const BehaviorParams& params, RngStream& rng);

/**
 * Full encounter: hook gate, match, watch, engagement. The RNG stream must be
 * the caller-derived per-encounter stream, which makes the outcome a pure
 * function of (user, content, params, stream key).
 */
EncounterOutcome simulate_encounter(const user::AgentProfile& agent,
                                    const user::PreferenceState& pref,
                                    const content::ContentProfile& profile,
                                    const BehaviorParams& params, RngStream& rng);

} // namespace svsim::interaction

#endif // SVSIM_INTERACTION_ENCOUNTER_HPP
