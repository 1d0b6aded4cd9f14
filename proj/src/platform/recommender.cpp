#include "svsim/platform/recommender.hpp"

#include <algorithm>
#include <cmath>

#include "svsim/errors.hpp"

namespace svsim::platform {

std::string_view to_string(RecoVariant v) {
    switch (v) {
        case RecoVariant::tiktok: return "tiktok";
        case RecoVariant::kuaishou: return "kuaishou";
        case RecoVariant::hybrid: return "hybrid";
    }
    return "?";
}

RecoVariant variant_from_string(std::string_view name) {
    if (name == "tiktok") return RecoVariant::tiktok;
    if (name == "kuaishou") return RecoVariant::kuaishou;
    if (name == "hybrid") return RecoVariant::hybrid;
    throw ConfigError("unknown recommender variant: " + std::string(name));
}

std::string_view to_string(CandidatePool p) {
    switch (p) {
        case CandidatePool::social: return "social";
        case CandidatePool::viral: return "viral";
        case CandidatePool::semantic: return "semantic";
        case CandidatePool::recent: return "recent";
    }
    return "?";
}

RecoConfig RecoConfig::preset(RecoVariant variant, double hybrid_lambda) {
    RecoConfig tiktok; // interest-led mix, popularity and recency boosts
    tiktok.variant = RecoVariant::tiktok;
    tiktok.pool_social = 0.2;
    tiktok.pool_viral = 0.2;
    tiktok.pool_semantic = 0.4;
    tiktok.pool_recent = 0.2;
    tiktok.w_sim = 0.4;
    tiktok.w_quality = 0.3;
    tiktok.w_recency = 0.2;
    tiktok.w_social = 0.1;

    RecoConfig kuaishou; // heavier social-connection weighting
    kuaishou.variant = RecoVariant::kuaishou;
    kuaishou.pool_social = 0.45;
    kuaishou.pool_viral = 0.1;
    kuaishou.pool_semantic = 0.3;
    kuaishou.pool_recent = 0.15;
    kuaishou.w_sim = 0.3;
    kuaishou.w_quality = 0.2;
    kuaishou.w_recency = 0.1;
    kuaishou.w_social = 0.4;
    kuaishou.diversity_max_per_creator = 1; // enforces creator diversity harder

    if (variant == RecoVariant::tiktok) return tiktok;
    if (variant == RecoVariant::kuaishou) return kuaishou;

    RecoConfig hybrid;
    hybrid.variant = RecoVariant::hybrid;
    hybrid.hybrid_lambda = hybrid_lambda;
    double l = hybrid_lambda;
    hybrid.pool_social = l * tiktok.pool_social + (1 - l) * kuaishou.pool_social;
    hybrid.pool_viral = l * tiktok.pool_viral + (1 - l) * kuaishou.pool_viral;
    hybrid.pool_semantic = l * tiktok.pool_semantic + (1 - l) * kuaishou.pool_semantic;
    hybrid.pool_recent = l * tiktok.pool_recent + (1 - l) * kuaishou.pool_recent;
    hybrid.w_sim = l * tiktok.w_sim + (1 - l) * kuaishou.w_sim;
    hybrid.w_quality = l * tiktok.w_quality + (1 - l) * kuaishou.w_quality;
    hybrid.w_recency = l * tiktok.w_recency + (1 - l) * kuaishou.w_recency;
    hybrid.w_social = l * tiktok.w_social + (1 - l) * kuaishou.w_social;
    hybrid.pre_rank_filter = true; // optional pre-ranking exposure filter
    return hybrid;
}

std::vector<int64_t> viral_pool_oracle(const content::ContentStore& store,
                                       const std::function<double(int64_t)>& velocity_of) {
    std::vector<std::pair<double, int64_t>> ranked;
    for (const auto& [id, profile] : store.items()) {
        double v = velocity_of ? velocity_of(id) : 0.0;
        if (v > 0.0) ranked.push_back({v, id});
    }
    if (ranked.empty()) return {};
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::size_t k = std::max<std::size_t>(1, store.size() / 100); // top 1%
    k = std::min(k, ranked.size());
    std::vector<int64_t> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].second);
    return out;
}

namespace {

struct PoolList {
    CandidatePool pool;
    std::vector<int64_t> ids; // pool-internal priority order
    std::size_t quota = 0;
};

} // namespace

std::vector<ScoredCandidate> retrieve(const user::PreferenceState& pref,
                                      const RecoSnapshot& snapshot, const RecoConfig& config,
                                      int64_t step) {
    const content::ContentStore& store = *snapshot.store;
    if (store.size() == 0) return {};

    // Social pool: followed creators' items, newest first.
    std::vector<std::pair<int64_t, int64_t>> social_sorted; // (-created_step, id)
    if (snapshot.following != nullptr) {
        for (const auto& [id, p] : store.items()) {
            if (snapshot.following->count(p.creator_id) > 0) {
                social_sorted.push_back({-p.created_step, id});
            }
        }
    }
    std::sort(social_sorted.begin(), social_sorted.end());

    // Viral pool: top 1% by global velocity, plus viral-stage items, which
    // stay broadly eligible after promotion.
    std::vector<int64_t> viral_ids = viral_pool_oracle(store, snapshot.velocity_of);
    if (snapshot.stage_viral) {
        for (const auto& [id, p] : store.items()) {
            if (snapshot.stage_viral(id) &&
                std::find(viral_ids.begin(), viral_ids.end(), id) == viral_ids.end()) {
                viral_ids.push_back(id);
            }
        }
    }

    // Semantic pool: exact nearest neighbors of the preference vector over
    // compact vectors.
    std::vector<std::pair<double, int64_t>> semantic_sorted; // (-sim, id)
    for (const auto& [id, p] : store.items()) {
        semantic_sorted.push_back({-cosine(pref.content_interests, p.compact_vector), id});
    }
    std::sort(semantic_sorted.begin(), semantic_sorted.end());

    // Recent pool: exploration by recency.
    std::vector<std::pair<int64_t, int64_t>> recent_sorted;
    for (const auto& [id, p] : store.items()) {
        recent_sorted.push_back({-p.created_step, id});
    }
    std::sort(recent_sorted.begin(), recent_sorted.end());
    (void)step;

    std::vector<PoolList> pools(4);
    pools[0].pool = CandidatePool::social;
    for (const auto& [key, id] : social_sorted) pools[0].ids.push_back(id);
    pools[1].pool = CandidatePool::viral;
    pools[1].ids = viral_ids;
    pools[2].pool = CandidatePool::semantic;
    for (const auto& [key, id] : semantic_sorted) pools[2].ids.push_back(id);
    pools[3].pool = CandidatePool::recent;
    for (const auto& [key, id] : recent_sorted) pools[3].ids.push_back(id);

    pools[0].quota = static_cast<std::size_t>(std::llround(config.pool_social * config.retrieval_n));
    pools[1].quota = static_cast<std::size_t>(std::llround(config.pool_viral * config.retrieval_n));
    pools[2].quota =
        static_cast<std::size_t>(std::llround(config.pool_semantic * config.retrieval_n));
    pools[3].quota = static_cast<std::size_t>(std::llround(config.pool_recent * config.retrieval_n));

    // First pass: quotas in pool priority order (social > viral > semantic >
    // recent), dedup keeps the higher-priority pool tag. Second pass: unused
    // capacity redistributes in the same order.
    std::vector<ScoredCandidate> out;
    std::set<int64_t> seen;
    auto take = [&](PoolList& pool, std::size_t limit) {
        std::size_t taken = 0;
        for (int64_t id : pool.ids) {
            if (out.size() >= config.retrieval_n || taken >= limit) break;
            if (!seen.insert(id).second) continue;
            ScoredCandidate c;
            c.content_id = id;
            c.creator_id = store.get(id).creator_id;
            c.source_pool = pool.pool;
            out.push_back(c);
            ++taken;
        }
    };
    for (PoolList& pool : pools) take(pool, pool.quota);
    for (PoolList& pool : pools) {
        if (out.size() >= config.retrieval_n) break;
        take(pool, config.retrieval_n); // spillover
    }
    return out;
}

void rank(const user::PreferenceState& pref, const RecoSnapshot& snapshot,
          std::vector<ScoredCandidate>& candidates, const RecoConfig& config, int64_t step) {
    const content::ContentStore& store = *snapshot.store;
    for (ScoredCandidate& c : candidates) {
        const content::ContentProfile& p = store.get(c.content_id);
        c.sim = cosine(pref.content_interests, p.compact_vector);
        c.quality = p.quality_score;
        double age = static_cast<double>(step - p.created_step);
        c.recency = std::exp(-std::max(0.0, age) / config.recency_half_life);
        c.social = (snapshot.following != nullptr && snapshot.following->count(p.creator_id) > 0)
                       ? 1.0
                       : 0.0;
        c.score = config.w_sim * c.sim + config.w_quality * c.quality +
                  config.w_recency * c.recency + config.w_social * c.social;
        c.exposure_boost = snapshot.eligibility_of ? snapshot.eligibility_of(c.content_id) : 1.0;
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const ScoredCandidate& a, const ScoredCandidate& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.content_id < b.content_id;
              });
}

std::vector<ScoredCandidate> rerank(const std::vector<ScoredCandidate>& ranked,
                                    const RecoConfig& config) {
    // Exposure multipliers reorder the eligible set without touching the
    // stored utility decomposition.
    std::vector<ScoredCandidate> weighted = ranked;
    std::stable_sort(weighted.begin(), weighted.end(),
                     [](const ScoredCandidate& a, const ScoredCandidate& b) {
                         double wa = a.score * a.exposure_boost;
                         double wb = b.score * b.exposure_boost;
                         if (wa != wb) return wa > wb;
                         return a.content_id < b.content_id;
                     });
    std::vector<ScoredCandidate> feed;
    std::map<int64_t, std::size_t> per_creator;
    for (const ScoredCandidate& c : weighted) {
        if (feed.size() >= config.feed_size) break;
        if (per_creator[c.creator_id] >= config.diversity_max_per_creator) continue;
        per_creator[c.creator_id] += 1;
        feed.push_back(c);
    }
    return feed;
}

FeedResult serve_feed(int64_t user_id, const user::PreferenceState& pref,
                      const RecoSnapshot& snapshot, const RecoConfig& config, int64_t step) {
    FeedResult result;
    result.trace = nlohmann::json::object();
    result.trace["user_id"] = user_id;
    result.trace["step"] = step;
    result.trace["variant"] = std::string(to_string(config.variant));

    if (snapshot.store == nullptr || snapshot.store->size() == 0) {
        result.trace["note"] = "empty retrieval";
        result.trace["candidates"] = nlohmann::json::array();
        return result;
    }

    std::vector<ScoredCandidate> candidates = retrieve(pref, snapshot, config, step);

    std::size_t filtered = 0;
    if (config.pre_rank_filter && snapshot.stage_ineligible) {
        auto keep_end = std::remove_if(candidates.begin(), candidates.end(),
                                       [&](const ScoredCandidate& c) {
                                           return snapshot.stage_ineligible(c.content_id);
                                       });
        filtered = static_cast<std::size_t>(candidates.end() - keep_end);
        candidates.erase(keep_end, candidates.end());
    }

    rank(pref, snapshot, candidates, config, step);
    result.feed = rerank(candidates, config);

    nlohmann::json pool_counts = nlohmann::json::object();
    for (const ScoredCandidate& c : candidates) {
        std::string pool(to_string(c.source_pool));
        pool_counts[pool] = pool_counts.value(pool, 0) + 1;
    }
    result.trace["pools"] = pool_counts;
    result.trace["pre_rank_filtered"] = filtered;
    nlohmann::json cands = nlohmann::json::array();
    for (const ScoredCandidate& c : candidates) {
        cands.push_back({{"id", c.content_id},
                         {"pool", std::string(to_string(c.source_pool))},
                         {"score", c.score},
                         {"boost", c.exposure_boost}});
    }
    result.trace["candidates"] = cands;
    nlohmann::json feed_ids = nlohmann::json::array();
    for (const ScoredCandidate& c : result.feed) feed_ids.push_back(c.content_id);
    result.trace["feed"] = feed_ids;
    return result;
}

} // namespace svsim::platform
