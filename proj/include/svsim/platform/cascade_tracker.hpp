/**
 * Share-cascade analytics: per-content share trees with incremental depth
 * and branching-factor maintenance that matches from-scratch recomputation.
 */

#ifndef SVSIM_PLATFORM_CASCADE_TRACKER_HPP
#define SVSIM_PLATFORM_CASCADE_TRACKER_HPP

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "svsim/bus/event_bus.hpp"

namespace svsim::platform {

struct CascadeNode {
    int64_t sharer = 0;
    int64_t parent_sharer = -1; // -1: shared straight from the root content
    int64_t step = 0;
    int64_t depth = 1;
    bool orphan_reattached = false; // unknown parent, attached to root
};

struct CascadeMetrics {
    int64_t root_content_id = 0;
    std::size_t node_count = 0;
    int64_t depth = 0;             // longest share chain from the root
    double branching_factor = 0.0; // mean children per internal node
};

class CascadeTracker {
public:
    /// Consumes VIDEO_SHARED events (sharer, parent_sharer).
    void attach(bus::EventBus& bus);

    /// Direct ingestion. Repeated shares by the same user extend nothing.
    /// Unknown parents attach to the root with the orphan flag set.
    void add_share(int64_t content_id, int64_t sharer, int64_t parent_sharer, int64_t step);

    CascadeMetrics metrics(int64_t content_id) const;
    std::vector<int64_t> tracked_roots() const;
    const std::map<int64_t, CascadeNode>& nodes(int64_t content_id) const;

    /// Independent from-scratch recomputation over the stored edges; the
    /// incremental metrics must agree with this on every tree.
    static CascadeMetrics recompute(int64_t content_id,
                                    const std::map<int64_t, CascadeNode>& nodes);

    /// Latest sharer of this content among the given users, if any; feeds
    /// parent attribution for new shares.
    std::optional<int64_t> last_sharer_among(int64_t content_id,
                                             const std::set<int64_t>& users) const;

    uint64_t state_hash() const;

private:
    struct Tree {
        std::map<int64_t, CascadeNode> nodes; // sharer -> node
        int64_t depth = 0;
        std::set<int64_t> internal;           // parents with >= 1 child (root = -1)
    };
    std::map<int64_t, Tree> trees_;
    static const std::map<int64_t, CascadeNode> empty_nodes_;
};

} // namespace svsim::platform

#endif // SVSIM_PLATFORM_CASCADE_TRACKER_HPP
