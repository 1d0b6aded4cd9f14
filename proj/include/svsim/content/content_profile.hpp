/**
 * Feature-based content representation: three layers per video.
 *   metadata   - title, description, hashtags, category
 *   predictors - hook strength / quality / virality, the simulation physics
 *   embeddings - a compact 50-dim vector for recommendation scoring plus
 *                seeded high-dimensional stand-ins for the modalities
 * Engagement state evolves through typed interaction events.
 */

#ifndef SVSIM_CONTENT_CONTENT_PROFILE_HPP
#define SVSIM_CONTENT_CONTENT_PROFILE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "svsim/dense_vector.hpp"

namespace svsim::content {

struct ContentProfile {
    int64_t content_id = 0;
    int64_t creator_id = 0;
    std::string archetype;

    // Metadata layer.
    std::string title;
    std::string description;
    std::vector<std::string> hashtags; // canonical keys, no '#'
    std::string visual_keywords;
    std::string audio_keywords;

    // Predictor layer.
    double duration = 1.0;      // seconds, >= 1
    double hook_strength = 0.5; // [0,1]
    double quality_score = 0.5; // [0,1]
    double virality = 0.5;      // [0,1]

    // Embedding layer.
    DenseVector compact_vector;    // 50
    DenseVector visual_embedding;  // 512
    DenseVector audio_embedding;   // 128
    DenseVector caption_embedding; // 768

    int64_t created_step = 0;

    // Dynamic engagement state; counters only move up.
    int64_t views = 0;
    int64_t likes = 0;
    int64_t shares = 0;
    int64_t comments = 0;
    int64_t gifts = 0;
    double gift_revenue = 0.0;
    double watch_time_total = 0.0;
    double completion_total = 0.0;
    double engagement_rate = 0.0; // (likes+shares+comments) / max(views,1)
    int64_t last_interaction_step = 0;

    double completion_mean() const {
        return views > 0 ? completion_total / static_cast<double>(views) : 0.0;
    }
    void recompute_engagement_rate() {
        engagement_rate = static_cast<double>(likes + shares + comments) /
                          static_cast<double>(views > 0 ? views : 1);
    }
};

/// Deterministic 50-dim recommendation vector:
///   dims 0-9   one-hot archetype group
///   dims 10-19 reserved (zero)
///   dims 20-39 keyword hash buckets from hashtags and title tokens
///   dims 40-49 U[0,0.5) noise from the content's stream (collision breaker)
DenseVector build_compact_vector(const ContentProfile& profile, uint64_t master_seed);

/// Seeded modality embeddings:
///   visual  512  seed = visual_keywords + creator_id
///   audio   128  seed = audio_keywords
///   caption 768  seed = title + description
void build_embeddings(ContentProfile& profile);

/// Keyword hash bucket for dims 20-39 (lowercased token, stable hash mod 20).
std::size_t keyword_bucket(const std::string& token);

} // namespace svsim::content

#endif // SVSIM_CONTENT_CONTENT_PROFILE_HPP
