#include "svsim/content/content_profile.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "svsim/content/archetype.hpp"
#include "svsim/embedding.hpp"
#include "svsim/rng.hpp"

namespace svsim::content {

namespace {

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            current.push_back(c);
        } else if (!current.empty()) {
            tokens.push_back(lowercase(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(lowercase(current));
    return tokens;
}

} // namespace

std::size_t keyword_bucket(const std::string& token) {
    return static_cast<std::size_t>(mix64(fnv1a(lowercase(token))) % 20);
}

DenseVector build_compact_vector(const ContentProfile& profile, uint64_t master_seed) {
    DenseVector v(50, 0.0);

    v[archetype_group(profile.archetype)] = 1.0;

    // dims 10-19 reserved for mood/style attributes, kept zero.

    // dims 20-39: keywords from hashtags and title hash into fixed buckets;
    // collisions add up but the bucket weight is capped at 1.
    std::vector<std::string> keywords;
    for (const std::string& tag : profile.hashtags) keywords.push_back(tag);
    for (const std::string& tok : tokenize(profile.title)) keywords.push_back(tok);
    for (const std::string& kw : keywords) {
        if (kw.empty()) continue;
        std::size_t bucket = 20 + keyword_bucket(kw);
        v[bucket] = std::min(1.0, v[bucket] + 1.0);
    }

    // dims 40-49: retrieval diversity noise from the content's own stream.
    RngStream noise(master_seed, "content-noise", {profile.content_id});
    for (std::size_t i = 40; i < 50; ++i) {
        v[i] = noise.uniform(0.0, 0.5);
    }
    return v;
}

void build_embeddings(ContentProfile& profile) {
    profile.visual_embedding = seeded_gaussian_embedding(
        profile.visual_keywords + std::to_string(profile.creator_id), 512);
    profile.audio_embedding = seeded_gaussian_embedding(profile.audio_keywords, 128);
    profile.caption_embedding =
        seeded_gaussian_embedding(profile.title + profile.description, 768);
}

} // namespace svsim::content
