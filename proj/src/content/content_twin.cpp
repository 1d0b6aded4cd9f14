#include "svsim/content/content_twin.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

#include "svsim/content/archetype.hpp"
#include "svsim/decision/surrogates.hpp"
#include "svsim/errors.hpp"

namespace svsim::content {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double tier_shift(const std::string& tier, const GeneratorConfig& config) {
    if (tier == "elite") return config.elite_shift;
    if (tier == "active") return config.active_shift;
    return config.casual_shift;
}

std::string join_tags(const std::vector<std::string>& tags) {
    std::string out;
    for (const std::string& t : tags) {
        if (!out.empty()) out.push_back(',');
        out += t;
    }
    return out;
}

std::vector<std::string> split_tags(const std::string& joined) {
    std::vector<std::string> out;
    std::stringstream ss(joined);
    std::string tag;
    while (std::getline(ss, tag, ',')) {
        if (!tag.empty()) out.push_back(tag);
    }
    return out;
}

} // namespace

ContentProfile create_content(const CreatorContext& creator, int64_t content_id, int64_t step,
                              const CreationContext& ctx, CaptionSource caption_source,
                              decision::DecisionOptimizer* optimizer, uint64_t master_seed,
                              const GeneratorConfig& config) {
    if (creator.tier == "consumer") {
        throw PolicyError("create_content: consumer-tier agents never post");
    }
    RngStream rng(master_seed, "create", {creator.creator_id, step});

    // Archetype: campaign steering pins the category; otherwise biased toward
    // the creator's niche with the remainder spread uniformly.
    std::string archetype_name;
    if (ctx.plan_entry && !ctx.plan_entry->category.empty()) {
        archetype_name = ctx.plan_entry->category;
        (void)archetype_by_name(archetype_name); // planned categories must exist
        rng.next_double();                       // keep draw layout stable either way
    } else if (rng.next_double() < config.expertise_bias) {
        archetype_name = creator.domain_expertise;
    } else {
        archetype_name = archetype_table()[rng.next_below(kArchetypeCount)].name;
    }
    const Archetype& arch = archetype_by_name(archetype_name);

    ContentProfile profile;
    profile.content_id = content_id;
    profile.creator_id = creator.creator_id;
    profile.archetype = arch.name;
    profile.created_step = step;
    profile.last_interaction_step = step;

    profile.duration = std::max(1.0, rng.normal(arch.duration_mean, arch.duration_sd));
    double shift = tier_shift(creator.tier, config);
    profile.hook_strength = clamp01(rng.normal(arch.hook_base + shift, config.hook_sd));
    profile.quality_score = clamp01(rng.normal(arch.quality_base + shift, config.quality_sd));
    profile.virality = clamp01(rng.normal(arch.viral_potential, config.virality_sd));

    // Caption: template bank directly, or routed through the decision service
    // (which itself degrades to the same surrogate under budget pressure).
    decision::json caption;
    if (caption_source == CaptionSource::llm && optimizer != nullptr) {
        decision::DecisionRequest request;
        request.task = decision::Task::CAPTION;
        request.prompt_payload = {{"archetype", arch.name},
                                  {"creator_id", creator.creator_id},
                                  {"trending", ctx.trending_tags}};
        request.requester = "content/" + std::to_string(creator.creator_id);
        caption = optimizer->submit(request).payload;
    } else {
        caption = decision::surrogate_caption(arch.name, ctx.trending_tags, rng);
    }
    profile.title = caption.at("title").get<std::string>();
    profile.description = caption.at("description").get<std::string>();
    for (const auto& h : caption.at("hashtags")) {
        std::string canon = decision::canonical_hashtag(h.get<std::string>());
        if (!canon.empty() &&
            std::find(profile.hashtags.begin(), profile.hashtags.end(), canon) ==
                profile.hashtags.end()) {
            profile.hashtags.push_back(canon);
        }
    }
    if (ctx.plan_entry) {
        // Steering contract: planned caption and hashtags land in the metadata.
        if (!ctx.plan_entry->short_caption.empty()) {
            profile.title = ctx.plan_entry->short_caption;
        }
        for (const std::string& h : ctx.plan_entry->hashtags) {
            std::string canon = decision::canonical_hashtag(h);
            if (!canon.empty() &&
                std::find(profile.hashtags.begin(), profile.hashtags.end(), canon) ==
                    profile.hashtags.end()) {
                profile.hashtags.push_back(canon);
            }
        }
    }

    profile.visual_keywords = arch.visual_keywords;
    profile.audio_keywords = arch.audio_keywords;
    profile.compact_vector = build_compact_vector(profile, master_seed);
    build_embeddings(profile);
    return profile;
}

bus::Payload content_to_payload(const ContentProfile& p) {
    return bus::Payload{{"content_id", p.content_id},
                        {"creator_id", p.creator_id},
                        {"archetype", p.archetype},
                        {"duration", p.duration},
                        {"hook_strength", p.hook_strength},
                        {"quality_score", p.quality_score},
                        {"virality", p.virality},
                        {"title", p.title},
                        {"description", p.description},
                        {"hashtags", join_tags(p.hashtags)},
                        {"visual_keywords", p.visual_keywords},
                        {"audio_keywords", p.audio_keywords}};
}

ContentProfile profile_from_payload(const bus::Payload& payload, uint64_t master_seed) {
    ContentProfile p;
    p.content_id = payload.at("content_id").get<int64_t>();
    p.creator_id = payload.at("creator_id").get<int64_t>();
    p.archetype = payload.at("archetype").get<std::string>();
    p.duration = payload.at("duration").get<double>();
    p.hook_strength = payload.at("hook_strength").get<double>();
    p.quality_score = payload.at("quality_score").get<double>();
    p.virality = payload.at("virality").get<double>();
    p.title = payload.at("title").get<std::string>();
    p.description = payload.at("description").get<std::string>();
    p.hashtags = split_tags(payload.at("hashtags").get<std::string>());
    p.visual_keywords = payload.at("visual_keywords").get<std::string>();
    p.audio_keywords = payload.at("audio_keywords").get<std::string>();
    // Vectors are pure functions of the metadata and ids: rebuild, not ship.
    p.compact_vector = build_compact_vector(p, master_seed);
    build_embeddings(p);
    return p;
}

void ContentStore::attach(bus::EventBus& bus) {
    using bus::EventType;
    bus.subscribe({EventType::CONTENT_CREATED, "content.store", 10},
                  [this](const bus::TypedEvent& e) {
                      ContentProfile p = profile_from_payload(e.payload, master_seed_);
                      p.created_step = e.step;
                      p.last_interaction_step = e.step;
                      insert(std::move(p));
                  });
    for (EventType t :
         {EventType::VIDEO_WATCHED, EventType::VIDEO_SKIPPED, EventType::VIDEO_ENGAGED}) {
        bus.subscribe({t, "content.interactions", 10},
                      [this](const bus::TypedEvent& e) { apply_interaction(e); });
    }
    bus.subscribe({EventType::GIFT_SENT, "content.gifts", 10}, [this](const bus::TypedEvent& e) {
        auto it = items_.find(e.payload.at("content_id").get<int64_t>());
        if (it == items_.end()) {
            throw LookupError("gift for unknown content");
        }
        it->second.gifts += 1;
        it->second.gift_revenue += e.payload.at("amount").get<double>();
        it->second.last_interaction_step = e.step;
    });
}

void ContentStore::insert(ContentProfile profile) {
    items_[profile.content_id] = std::move(profile);
}

void ContentStore::apply_interaction(const bus::TypedEvent& event) {
    int64_t id = event.payload.at("content_id").get<int64_t>();
    auto it = items_.find(id);
    if (it == items_.end()) {
        throw LookupError("apply_interaction: unknown content " + std::to_string(id));
    }
    ContentProfile& p = it->second;
    switch (event.type) {
        case bus::EventType::VIDEO_WATCHED:
        case bus::EventType::VIDEO_SKIPPED: {
            // Skips count as impressions: the exposure-gate rates are over views.
            p.views += 1;
            p.watch_time_total += event.payload.at("watch_time").get<double>();
            p.completion_total += event.payload.at("completion_rate").get<double>();
            break;
        }
        case bus::EventType::VIDEO_ENGAGED: {
            const std::string kind = event.payload.at("engagement_type").get<std::string>();
            if (kind == "like") p.likes += 1;
            else if (kind == "share") p.shares += 1;
            else if (kind == "comment") p.comments += 1;
            break;
        }
        default:
            return;
    }
    p.recompute_engagement_rate();
    p.last_interaction_step = event.step;
}

std::vector<const ContentProfile*> ContentStore::query_candidates(const ContentQuery& q) const {
    std::vector<const ContentProfile*> out;
    for (const auto& [id, profile] : items_) {
        if (q.archetype && profile.archetype != *q.archetype) continue;
        if (q.created_after && profile.created_step <= *q.created_after) continue;
        if (q.predicate && !q.predicate(profile)) continue;
        out.push_back(&profile);
    }
    return out; // std::map iteration is already content_id ascending
}

const ContentProfile& ContentStore::get(int64_t content_id) const {
    auto it = items_.find(content_id);
    if (it == items_.end()) {
        throw LookupError("unknown content " + std::to_string(content_id));
    }
    return it->second;
}

uint64_t ContentStore::state_hash() const {
    uint64_t h = 1469598103934665603ULL;
    for (const auto& [id, p] : items_) {
        h = fnv1a_u64(static_cast<uint64_t>(id), h);
        h = fnv1a(p.archetype, h);
        h = fnv1a(p.title, h);
        h = fnv1a_u64(static_cast<uint64_t>(p.views), h);
        h = fnv1a_u64(static_cast<uint64_t>(p.likes), h);
        h = fnv1a_u64(static_cast<uint64_t>(p.shares), h);
        h = fnv1a_u64(static_cast<uint64_t>(p.comments), h);
        h = fnv1a_u64(static_cast<uint64_t>(p.gifts), h);
        auto bits = [](double d) {
            uint64_t u;
            static_assert(sizeof(u) == sizeof(d));
            std::memcpy(&u, &d, sizeof(u));
            return u;
        };
        h = fnv1a_u64(bits(p.hook_strength), h);
        h = fnv1a_u64(bits(p.watch_time_total), h);
        h = fnv1a_u64(bits(p.completion_total), h);
        h = fnv1a_u64(bits(p.gift_revenue), h);
        h = fnv1a_u64(bits(p.engagement_rate), h);
    }
    return mix64(h);
}

} // namespace svsim::content
