/**
 * Platform registry: the persistent system of record for platform-facing
 * state. Control state holds the active policy configuration; observational
 * state holds append-only ledgers and derived aggregates. Only registered
 * platform handlers may commit; every commit is journaled with a version, so
 * journal replay and snapshot/restore reproduce the exact state. Other twins
 * read through const accessors.
 */

#ifndef SVSIM_PLATFORM_REGISTRY_HPP
#define SVSIM_PLATFORM_REGISTRY_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace svsim::platform {

using json = nlohmann::json;

/// The committed mutation vocabulary; journal records re-apply these ops.
struct Mutation {
    enum class Kind : uint8_t { set_control, incr_aggregate, put_record, append_ledger };
    Kind kind = Kind::set_control;
    std::string space; // aggregate scope / record space / ledger name
    std::string key;
    std::string field;  // aggregate field
    double delta = 0.0; // aggregate increment
    json value;         // control value / record body / ledger entry

    static Mutation set_control(std::string key, json value);
    static Mutation incr_aggregate(std::string space, std::string key, std::string field,
                                   double delta);
    static Mutation put_record(std::string space, std::string key, json value);
    static Mutation append_ledger(std::string ledger, json entry);

    json to_json() const;
    static Mutation from_json(const json& j);
};

/**
 * In-memory rolling counters mirroring hot aggregates (recent per-key
 * activity windows). Advisory only: the durable aggregates are the source of
 * truth and any divergence is a defect, checked by reconcile().
 */
class RollingCache {
public:
    void bump(const std::string& space, const std::string& key, const std::string& field,
              double delta);
    double get(const std::string& space, const std::string& key, const std::string& field) const;
    void clear() { counters_.clear(); }
    const std::map<std::string, double>& raw() const { return counters_; }

private:
    std::map<std::string, double> counters_;
};

class PlatformRegistry {
public:
    /// Grants commit rights; platform-side handlers register at startup.
    void register_platform_handler(const std::string& handler_id);
    bool is_platform_handler(const std::string& handler_id) const;

    /// Applies the mutation atomically, bumps the version, journals the op.
    /// Throws AccessViolation for unregistered callers.
    uint64_t commit(const std::string& handler_id, const Mutation& mutation);

    uint64_t version() const { return version_; }

    // Read-only accessors.
    json control(const std::string& key) const; // null when absent
    double aggregate(const std::string& space, const std::string& key,
                     const std::string& field) const;
    std::map<std::string, std::map<std::string, double>> aggregates_in(
        const std::string& space) const; // key -> field -> value
    json record(const std::string& space, const std::string& key) const; // null when absent
    std::map<std::string, json> records_in(const std::string& space) const;
    const std::vector<json>& ledger(const std::string& name) const;

    const RollingCache& rolling_cache() const { return cache_; }

    /// Cache/durable agreement check; returns the diverging keys (empty =
    /// healthy).
    std::vector<std::string> reconcile() const;

    // Journal + snapshot plumbing.
    const std::vector<json>& journal() const { return journal_; }
    static PlatformRegistry replay_journal(const std::vector<json>& journal_records);

    json snapshot() const;
    static PlatformRegistry restore(const json& snap); // throws CorruptLogError on bad integrity
    uint64_t state_hash() const;

private:
    void apply(const Mutation& m);

    uint64_t version_ = 0;
    std::set<std::string> platform_handlers_;
    std::map<std::string, json> control_;
    // space -> key -> field -> value
    std::map<std::string, std::map<std::string, std::map<std::string, double>>> aggregates_;
    std::map<std::string, std::map<std::string, json>> records_;
    std::map<std::string, std::vector<json>> ledgers_;
    std::vector<json> journal_;
    RollingCache cache_;
    static const std::vector<json> empty_ledger_;
};

} // namespace svsim::platform

#endif // SVSIM_PLATFORM_REGISTRY_HPP
