/**
 * Deterministic surrogate generators: rule/template implementations of each
 * decision task, schema-identical to live outputs. They keep the execution
 * interface well-defined when live access is disabled or budget-gated.
 */

#ifndef SVSIM_DECISION_SURROGATES_HPP
#define SVSIM_DECISION_SURROGATES_HPP

#include <string>
#include <vector>

#include "svsim/decision/types.hpp"
#include "svsim/rng.hpp"

namespace svsim::decision {

/// Static persona templates keyed by (tier, domain archetype).
json surrogate_persona(const std::string& tier, const std::string& domain);

/// Template captions conditioned on archetype and trending tags.
json surrogate_caption(const std::string& archetype, const std::vector<std::string>& trending,
                       RngStream& rng);

/// Comment text drawn from the fixed template bank.
json surrogate_comment(RngStream& rng);
const std::vector<std::string>& comment_template_bank();

/// Fixed three-day progression: day 0 launch/awareness, day 1 engagement
/// follow-up, day 2 monetization conversion with a stronger call-to-action.
/// Independent of trend snapshots and past performance.
CampaignPlan surrogate_campaign(const std::string& creator_domain, int64_t creator_id);

/// Rule-based forecast from an epoch-count series per hashtag:
/// rising keys emitted with confidence = net rise normalized by the current
/// level, clamped to [0,1].
std::vector<TrendForecast> surrogate_trend(const json& series_by_key);

/// The rule action policy expressed over a request payload (energy, boredom,
/// feed_remaining, pre-drawn creation uniform).
json surrogate_action(const json& context);

/// Dispatch by task; result passes validate_result for every admissible input.
json run_surrogate(const DecisionRequest& request, RngStream& rng);

} // namespace svsim::decision

#endif // SVSIM_DECISION_SURROGATES_HPP
