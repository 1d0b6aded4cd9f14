/**
 * Content twin: archetype-driven generation and the single-writer content
 * store. Profiles are created by the generator, broadcast as CONTENT_CREATED
 * events, and inserted by the store's own event handler, so replaying a log
 * rebuilds the store exactly. Dynamic engagement state moves only through
 * typed interaction events.
 */

#ifndef SVSIM_CONTENT_CONTENT_TWIN_HPP
#define SVSIM_CONTENT_CONTENT_TWIN_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svsim/bus/event_bus.hpp"
#include "svsim/content/content_profile.hpp"
#include "svsim/decision/optimizer.hpp"
#include "svsim/decision/types.hpp"
#include "svsim/rng.hpp"

namespace svsim::content {

/// Creator-side inputs the generator needs; filled in from the user twin.
struct CreatorContext {
    int64_t creator_id = 0;
    std::string tier = "casual"; // elite | active | casual | consumer
    std::string domain_expertise = "LIFESTYLE";
};

/// Trend-and-plan conditioning for a creation.
struct CreationContext {
    std::vector<std::string> trending_tags;
    std::optional<decision::CampaignPlan::Entry> plan_entry; // steering, when planned
};

enum class CaptionSource { template_bank, llm };

struct GeneratorConfig {
    double expertise_bias = 0.6; // archetype sampling mass on the creator's niche
    double elite_shift = 0.15;   // mean shift on hook and quality
    double active_shift = 0.08;
    double casual_shift = 0.0;
    double hook_sd = 0.08;
    double quality_sd = 0.08;
    double virality_sd = 0.05;
};

/**
 * Samples a new content profile. Archetype sampling is biased toward the
 * creator's niche unless a campaign entry pins the category; quality
 * primitives are drawn around the archetype baselines shifted by creator
 * tier. Captions come from the template bank or a CAPTION decision request
 * (with template fallback). Throws PolicyError for consumer-tier creators.
 */
ContentProfile create_content(const CreatorContext& creator, int64_t content_id, int64_t step,
                              const CreationContext& ctx, CaptionSource caption_source,
                              decision::DecisionOptimizer* optimizer, uint64_t master_seed,
                              const GeneratorConfig& config = {});

/// CONTENT_CREATED payload carrying everything needed to rebuild the profile.
bus::Payload content_to_payload(const ContentProfile& profile);
ContentProfile profile_from_payload(const bus::Payload& payload, uint64_t master_seed);

struct ContentQuery {
    std::optional<std::string> archetype;
    std::optional<int64_t> created_after; // strictly newer than this step
    std::function<bool(const ContentProfile&)> predicate; // e.g. stage filter
};

class ContentStore {
public:
    explicit ContentStore(uint64_t master_seed) : master_seed_(master_seed) {}

    /// Subscribes the store's handlers (insert + interaction counters).
    void attach(bus::EventBus& bus);

    /// Read-only candidate query; result ordered by content_id ascending.
    std::vector<const ContentProfile*> query_candidates(const ContentQuery& query) const;

    const ContentProfile& get(int64_t content_id) const; // throws LookupError
    bool contains(int64_t content_id) const { return items_.count(content_id) > 0; }
    std::size_t size() const { return items_.size(); }
    const std::map<int64_t, ContentProfile>& items() const { return items_; }

    /// Direct mutation entry points (also used by the event handlers).
    void insert(ContentProfile profile);
    void apply_interaction(const bus::TypedEvent& event); // throws LookupError

    uint64_t state_hash() const;

private:
    uint64_t master_seed_;
    std::map<int64_t, ContentProfile> items_;
};

} // namespace svsim::content

#endif // SVSIM_CONTENT_CONTENT_TWIN_HPP
