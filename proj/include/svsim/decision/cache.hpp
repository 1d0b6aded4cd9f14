#ifndef SVSIM_DECISION_CACHE_HPP
#define SVSIM_DECISION_CACHE_HPP

#include <map>
#include <optional>
#include <string>

#include "svsim/decision/types.hpp"

namespace svsim::decision {

struct CacheEntry {
    std::string key;
    Task task = Task::COMMENT;
    json result;
    int64_t created_at = 0;
};

/// Content-addressed key over (prompt payload, model, temperature).
/// Pure function: any component change produces a different key.
std::string cache_key(const DecisionRequest& request);

/**
 * Disk-backed result cache: one JSON record per key, appended as results
 * arrive, loaded at startup. Only validated live results are stored, so a
 * cache hit replays a previously validated output at zero cost.
 */
class DecisionCache {
public:
    DecisionCache() = default;

    /// Binds the cache to a file and loads existing records. Missing file is
    /// an empty cache. Empty path keeps the cache memory-only.
    void open(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    std::optional<CacheEntry> get(const std::string& key) const;

    /// Inserts and, when disk-backed, appends the record to the file.
    void put(CacheEntry entry);

    std::size_t size() const { return entries_.size(); }

private:
    std::string path_;
    std::map<std::string, CacheEntry> entries_;
};

} // namespace svsim::decision

#endif // SVSIM_DECISION_CACHE_HPP
