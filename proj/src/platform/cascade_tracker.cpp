#include "svsim/platform/cascade_tracker.hpp"

#include <algorithm>

#include "svsim/rng.hpp"

namespace svsim::platform {

const std::map<int64_t, CascadeNode> CascadeTracker::empty_nodes_ = {};

void CascadeTracker::attach(bus::EventBus& bus) {
    bus.subscribe({bus::EventType::VIDEO_SHARED, "platform.cascades", 40},
                  [this](const bus::TypedEvent& e) {
                      add_share(e.payload.at("content_id").get<int64_t>(),
                                e.payload.at("user_id").get<int64_t>(),
                                e.payload.at("parent_sharer_id").get<int64_t>(), e.step);
                  });
}

void CascadeTracker::add_share(int64_t content_id, int64_t sharer, int64_t parent_sharer,
                               int64_t step) {
    Tree& tree = trees_[content_id];
    if (tree.nodes.count(sharer) > 0) {
        return; // a user appears once per cascade
    }
    CascadeNode node;
    node.sharer = sharer;
    node.step = step;
    auto parent_it = tree.nodes.find(parent_sharer);
    if (parent_sharer >= 0 && parent_it != tree.nodes.end()) {
        node.parent_sharer = parent_sharer;
        node.depth = parent_it->second.depth + 1;
    } else {
        // Root share, or an unknown parent reattached to the root.
        node.orphan_reattached = parent_sharer >= 0;
        node.parent_sharer = -1;
        node.depth = 1;
    }
    tree.internal.insert(node.parent_sharer);
    tree.depth = std::max(tree.depth, node.depth);
    tree.nodes[sharer] = node;
}

CascadeMetrics CascadeTracker::metrics(int64_t content_id) const {
    CascadeMetrics m;
    m.root_content_id = content_id;
    auto it = trees_.find(content_id);
    if (it == trees_.end()) return m;
    m.node_count = it->second.nodes.size();
    m.depth = it->second.depth;
    if (!it->second.internal.empty()) {
        // Every node is one edge out of its parent.
        m.branching_factor = static_cast<double>(m.node_count) /
                             static_cast<double>(it->second.internal.size());
    }
    return m;
}

CascadeMetrics CascadeTracker::recompute(int64_t content_id,
                                         const std::map<int64_t, CascadeNode>& nodes) {
    CascadeMetrics m;
    m.root_content_id = content_id;
    m.node_count = nodes.size();
    std::set<int64_t> parents;
    for (const auto& [sharer, node] : nodes) {
        parents.insert(node.parent_sharer);
        // Walk to the root counting hops; acyclic by construction.
        int64_t depth = 0;
        int64_t cursor = sharer;
        while (cursor >= 0) {
            ++depth;
            cursor = nodes.at(cursor).parent_sharer;
        }
        m.depth = std::max(m.depth, depth);
    }
    if (!parents.empty()) {
        m.branching_factor =
            static_cast<double>(m.node_count) / static_cast<double>(parents.size());
    }
    return m;
}

std::vector<int64_t> CascadeTracker::tracked_roots() const {
    std::vector<int64_t> out;
    for (const auto& [id, tree] : trees_) out.push_back(id);
    return out;
}

const std::map<int64_t, CascadeNode>& CascadeTracker::nodes(int64_t content_id) const {
    auto it = trees_.find(content_id);
    return it == trees_.end() ? empty_nodes_ : it->second.nodes;
}

std::optional<int64_t> CascadeTracker::last_sharer_among(int64_t content_id,
                                                         const std::set<int64_t>& users) const {
    auto it = trees_.find(content_id);
    if (it == trees_.end()) return std::nullopt;
    std::optional<int64_t> best;
    int64_t best_step = -1;
    for (const auto& [sharer, node] : it->second.nodes) {
        if (users.count(sharer) == 0) continue;
        if (node.step > best_step || (node.step == best_step && best && sharer < *best)) {
            best = sharer;
            best_step = node.step;
        }
    }
    return best;
}

uint64_t CascadeTracker::state_hash() const {
    uint64_t h = 1469598103934665603ULL;
    for (const auto& [root, tree] : trees_) {
        h = fnv1a_u64(static_cast<uint64_t>(root), h);
        for (const auto& [sharer, node] : tree.nodes) {
            h = fnv1a_u64(static_cast<uint64_t>(sharer), h);
            h = fnv1a_u64(static_cast<uint64_t>(node.parent_sharer + 1), h);
            h = fnv1a_u64(static_cast<uint64_t>(node.depth), h);
        }
    }
    return mix64(h);
}

} // namespace svsim::platform
