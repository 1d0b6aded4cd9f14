#include "svsim/interaction/encounter.hpp"

#include <algorithm>
#include <cmath>

#include "svsim/decision/surrogates.hpp"

namespace svsim::interaction {

double skip_probability(double hook_strength, double attention_span, double epsilon,
                        const BehaviorParams& params) {
    double hook = hook_strength <= 0.0 ? 0.01 : hook_strength;
    double x = params.alpha / hook + params.beta / attention_span + epsilon;
    return 1.0 / (1.0 + std::exp(-x));
}

double interest_match(const user::PreferenceState& pref, const content::ContentProfile& profile,
                      const BehaviorParams& params) {
    if (pref.visual_pref || pref.audio_pref || pref.text_pref) {
        // Multimodal fusion with explicit weights; absent slots contribute 0.
        double total = 0.0;
        if (pref.visual_pref) {
            total += params.fusion_visual * cosine(*pref.visual_pref, profile.visual_embedding);
        }
        if (pref.audio_pref) {
            total += params.fusion_audio * cosine(*pref.audio_pref, profile.audio_embedding);
        }
        if (pref.text_pref) {
            total += params.fusion_text * cosine(*pref.text_pref, profile.caption_embedding);
        }
        return std::clamp(total, -1.0, 1.0);
    }
    if (params.match_mode == MatchMode::compact) {
        return cosine(pref.content_interests, profile.compact_vector);
    }
    // Fallback projection: evolving low-dim preferences against a truncated
    // slice of the high-dim visual embedding.
    return cosine(pref.content_interests,
                  truncate(profile.visual_embedding, pref.content_interests.dim()));
}

std::pair<double, double> sample_watch(double duration, double match,
                                       const BehaviorParams& params, RngStream& rng) {
    double expected =
        std::clamp(params.base_completion + params.match_uplift * match, 0.02, 1.0);
    // Mean-preserving log-normal dispersion: E[exp(N(-s^2/2, s^2))] = 1.
    double sigma = params.lognormal_sigma;
    double draw = expected * std::exp(rng.normal(-0.5 * sigma * sigma, sigma));
    double completion = std::min(draw, 1.0);
    double watch_time = duration * completion;
    return {watch_time, completion};
}

double engagement_gain(double match, double completion) {
    return std::clamp(0.5 + 0.5 * completion + 0.3 * match, 0.0, 1.5);
}

void sample_engagements(EncounterOutcome& outcome, const user::EngagementPropensities& props,
                        double match, const BehaviorParams& params, RngStream& rng) {
    double gain = engagement_gain(match, outcome.completion_rate) * params.engagement_scale;
    auto roll = [&](double propensity) {
        return rng.next_double() < std::min(propensity * gain, 1.0);
    };
    if (roll(props.like)) outcome.engagements.insert("like");
    if (roll(props.share)) outcome.engagements.insert("share");
    if (roll(props.comment)) {
        outcome.engagements.insert("comment");
        outcome.comment_text =
            decision::surrogate_comment(rng).at("text").get<std::string>();
    }
    if (params.monetization_enabled && roll(props.gift)) {
        outcome.engagements.insert("gift");
        outcome.gift_amount = params.gift_menu.empty()
                                  ? 1.0
                                  : params.gift_menu[rng.next_below(params.gift_menu.size())];
    }
}

EncounterOutcome simulate_encounter(const user::AgentProfile& agent,
                                    const user::PreferenceState& pref,
                                    const content::ContentProfile& profile,
                                    const BehaviorParams& params, RngStream& rng) {
    EncounterOutcome outcome;

    // Stage 1: hook gate within the first seconds.
    double epsilon = rng.normal(0.0, params.epsilon_scale);
    double p_skip = skip_probability(profile.hook_strength, agent.attention_span, epsilon, params);
    if (rng.next_double() < p_skip) {
        outcome.hooked = false;
        outcome.skipped = true;
        outcome.watch_time = rng.uniform(0.3, params.hook_window);
        outcome.completion_rate = std::min(outcome.watch_time / profile.duration, 1.0);
        return outcome; // early skip: no engagements
    }
    outcome.hooked = true;

    // Stage 2: interest match.
    outcome.match = interest_match(pref, profile, params);

    // Stage 3: stochastic watch time.
    auto [watch_time, completion] = sample_watch(profile.duration, outcome.match, params, rng);
    outcome.watch_time = watch_time;
    outcome.completion_rate = completion;

    // Stage 4: engagement sampling conditional on the watch outcome.
    sample_engagements(outcome, agent.propensities, outcome.match, params, rng);

    // Optional follow after a strong interaction, shaped by creator memory
    // upstream (the orchestrator scales the base with retained familiarity).
    bool strong = outcome.engagements.count("share") > 0 || outcome.engagements.count("gift") > 0 ||
                  (outcome.engagements.count("like") > 0 && completion > 0.9);
    if (strong && rng.next_double() < params.follow_prob_base) {
        outcome.followed_creator = true;
    }
    return outcome;
}

} // namespace svsim::interaction
