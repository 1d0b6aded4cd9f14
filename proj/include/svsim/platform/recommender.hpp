/**
 * Two-stage recommendation funnel: candidate retrieval from four pools
 * (social, viral, semantic, recent), weighted-utility ranking, and a
 * re-ranking pass that applies exposure multipliers and creator-diversity
 * limits. Stateless over read-only snapshots; serving mutates nothing.
 */

#ifndef SVSIM_PLATFORM_RECOMMENDER_HPP
#define SVSIM_PLATFORM_RECOMMENDER_HPP

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "svsim/content/content_twin.hpp"
#include "svsim/user/agent.hpp"

namespace svsim::platform {

enum class RecoVariant : uint8_t { tiktok, kuaishou, hybrid };
std::string_view to_string(RecoVariant v);
RecoVariant variant_from_string(std::string_view name);

enum class CandidatePool : uint8_t { social, viral, semantic, recent };
std::string_view to_string(CandidatePool p);

struct RecoConfig {
    RecoVariant variant = RecoVariant::tiktok;
    std::size_t retrieval_n = 100;
    std::size_t feed_size = 10;
    // Pool mix shares, summing to 1.
    double pool_social = 0.2;
    double pool_viral = 0.2;
    double pool_semantic = 0.4;
    double pool_recent = 0.2;
    // Utility weights: similarity, quality, recency, social boost.
    double w_sim = 0.4;
    double w_quality = 0.3;
    double w_recency = 0.2;
    double w_social = 0.1;
    std::size_t diversity_max_per_creator = 2;
    double hybrid_lambda = 0.5; // hybrid = lambda * tiktok + (1-lambda) * kuaishou
    bool pre_rank_filter = false;
    double recency_half_life = 24.0; // steps

    static RecoConfig preset(RecoVariant variant, double hybrid_lambda = 0.5);
};

struct ScoredCandidate {
    int64_t content_id = 0;
    int64_t creator_id = 0;
    CandidatePool source_pool = CandidatePool::recent;
    double sim = 0.0;
    double quality = 0.0;
    double recency = 0.0;
    double social = 0.0;
    double score = 0.0;          // w . features, reproducible from the parts
    double exposure_boost = 1.0; // stage eligibility x governance multiplier
};

struct FeedResult {
    std::vector<ScoredCandidate> feed;
    nlohmann::json trace; // pools, scores, and filter decisions for audit
};

/// Read-only environment the funnel runs against.
struct RecoSnapshot {
    const content::ContentStore* store = nullptr;
    const std::set<int64_t>* following = nullptr; // the user's follow set
    // Per-content interaction velocity (events/hour); feeds the viral pool.
    std::function<double(int64_t)> velocity_of;
    // Exposure multipliers (promotion stage and governance boosts).
    std::function<double(int64_t)> eligibility_of;
    std::function<bool(int64_t)> stage_ineligible; // pre-rank filter predicate
    // Viral-stage content ids: broadly eligible, injected into the viral
    // pool alongside the top-velocity set.
    std::function<bool(int64_t)> stage_viral;
};

/// Top 1% of store items by velocity (at least one when any velocity is
/// positive), ties by content_id. The brute-force definition of the viral pool.
std::vector<int64_t> viral_pool_oracle(const content::ContentStore& store,
                                       const std::function<double(int64_t)>& velocity_of);

std::vector<ScoredCandidate> retrieve(const user::PreferenceState& pref,
                                      const RecoSnapshot& snapshot, const RecoConfig& config,
                                      int64_t step);

/// Scores candidates in place and sorts descending, ties by content_id.
void rank(const user::PreferenceState& pref, const RecoSnapshot& snapshot,
          std::vector<ScoredCandidate>& candidates, const RecoConfig& config, int64_t step);

/// Exposure-weighted order plus the greedy per-creator diversity cap,
/// truncated to feed_size.
std::vector<ScoredCandidate> rerank(const std::vector<ScoredCandidate>& ranked,
                                    const RecoConfig& config);

FeedResult serve_feed(int64_t user_id, const user::PreferenceState& pref,
                      const RecoSnapshot& snapshot, const RecoConfig& config, int64_t step);

} // namespace svsim::platform

#endif // SVSIM_PLATFORM_RECOMMENDER_HPP
