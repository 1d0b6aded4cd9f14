#include "svsim/platform/registry.hpp"

#include "svsim/errors.hpp"
#include "svsim/rng.hpp"

namespace svsim::platform {

const std::vector<json> PlatformRegistry::empty_ledger_ = {};

Mutation Mutation::set_control(std::string key, json value) {
    Mutation m;
    m.kind = Kind::set_control;
    m.key = std::move(key);
    m.value = std::move(value);
    return m;
}

Mutation Mutation::incr_aggregate(std::string space, std::string key, std::string field,
                                  double delta) {
    Mutation m;
    m.kind = Kind::incr_aggregate;
    m.space = std::move(space);
    m.key = std::move(key);
    m.field = std::move(field);
    m.delta = delta;
    return m;
}

Mutation Mutation::put_record(std::string space, std::string key, json value) {
    Mutation m;
    m.kind = Kind::put_record;
    m.space = std::move(space);
    m.key = std::move(key);
    m.value = std::move(value);
    return m;
}

Mutation Mutation::append_ledger(std::string ledger, json entry) {
    Mutation m;
    m.kind = Kind::append_ledger;
    m.space = std::move(ledger);
    m.value = std::move(entry);
    return m;
}

json Mutation::to_json() const {
    static const char* names[] = {"set_control", "incr_aggregate", "put_record", "append_ledger"};
    return json{{"kind", names[static_cast<int>(kind)]}, {"space", space},     {"key", key},
                {"field", field},                        {"delta", delta},     {"value", value}};
}

Mutation Mutation::from_json(const json& j) {
    Mutation m;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "set_control") m.kind = Kind::set_control;
    else if (kind == "incr_aggregate") m.kind = Kind::incr_aggregate;
    else if (kind == "put_record") m.kind = Kind::put_record;
    else if (kind == "append_ledger") m.kind = Kind::append_ledger;
    else throw CorruptLogError("unknown mutation kind: " + kind);
    m.space = j.value("space", "");
    m.key = j.value("key", "");
    m.field = j.value("field", "");
    m.delta = j.value("delta", 0.0);
    m.value = j.value("value", json());
    return m;
}

void RollingCache::bump(const std::string& space, const std::string& key, const std::string& field,
                        double delta) {
    counters_[space + "/" + key + "/" + field] += delta;
}

double RollingCache::get(const std::string& space, const std::string& key,
                         const std::string& field) const {
    auto it = counters_.find(space + "/" + key + "/" + field);
    return it == counters_.end() ? 0.0 : it->second;
}

void PlatformRegistry::register_platform_handler(const std::string& handler_id) {
    platform_handlers_.insert(handler_id);
}

bool PlatformRegistry::is_platform_handler(const std::string& handler_id) const {
    return platform_handlers_.count(handler_id) > 0;
}

uint64_t PlatformRegistry::commit(const std::string& handler_id, const Mutation& mutation) {
    if (!is_platform_handler(handler_id)) {
        throw AccessViolation("registry commit from non-platform caller: " + handler_id);
    }
    apply(mutation);
    ++version_;
    json record = mutation.to_json();
    record["version"] = version_;
    record["handler"] = handler_id;
    journal_.push_back(std::move(record));
    return version_;
}

void PlatformRegistry::apply(const Mutation& m) {
    switch (m.kind) {
        case Mutation::Kind::set_control:
            control_[m.key] = m.value;
            break;
        case Mutation::Kind::incr_aggregate:
            aggregates_[m.space][m.key][m.field] += m.delta;
            cache_.bump(m.space, m.key, m.field, m.delta);
            break;
        case Mutation::Kind::put_record:
            records_[m.space][m.key] = m.value;
            break;
        case Mutation::Kind::append_ledger:
            ledgers_[m.space].push_back(m.value);
            break;
    }
}

json PlatformRegistry::control(const std::string& key) const {
    auto it = control_.find(key);
    return it == control_.end() ? json() : it->second;
}

double PlatformRegistry::aggregate(const std::string& space, const std::string& key,
                                   const std::string& field) const {
    auto s = aggregates_.find(space);
    if (s == aggregates_.end()) return 0.0;
    auto k = s->second.find(key);
    if (k == s->second.end()) return 0.0;
    auto f = k->second.find(field);
    return f == k->second.end() ? 0.0 : f->second;
}

std::map<std::string, std::map<std::string, double>> PlatformRegistry::aggregates_in(
    const std::string& space) const {
    auto it = aggregates_.find(space);
    if (it == aggregates_.end()) return {};
    return it->second;
}

json PlatformRegistry::record(const std::string& space, const std::string& key) const {
    auto s = records_.find(space);
    if (s == records_.end()) return json();
    auto k = s->second.find(key);
    return k == s->second.end() ? json() : k->second;
}

std::map<std::string, json> PlatformRegistry::records_in(const std::string& space) const {
    auto it = records_.find(space);
    if (it == records_.end()) return {};
    return it->second;
}

const std::vector<json>& PlatformRegistry::ledger(const std::string& name) const {
    auto it = ledgers_.find(name);
    return it == ledgers_.end() ? empty_ledger_ : it->second;
}

std::vector<std::string> PlatformRegistry::reconcile() const {
    std::vector<std::string> diverging;
    for (const auto& [space, keys] : aggregates_) {
        for (const auto& [key, fields] : keys) {
            for (const auto& [field, value] : fields) {
                if (cache_.get(space, key, field) != value) {
                    diverging.push_back(space + "/" + key + "/" + field);
                }
            }
        }
    }
    return diverging;
}

PlatformRegistry PlatformRegistry::replay_journal(const std::vector<json>& journal_records) {
    PlatformRegistry fresh;
    for (const json& record : journal_records) {
        Mutation m = Mutation::from_json(record);
        uint64_t expect = fresh.version_ + 1;
        if (record.value("version", uint64_t{0}) != expect) {
            throw CorruptLogError("journal version gap at " + std::to_string(expect));
        }
        fresh.apply(m);
        fresh.version_ = expect;
        fresh.journal_.push_back(record);
    }
    return fresh;
}

json PlatformRegistry::snapshot() const {
    json snap;
    snap["version"] = version_;
    snap["control"] = control_;
    snap["records"] = records_;
    snap["ledgers"] = ledgers_;
    json aggs = json::object();
    for (const auto& [space, keys] : aggregates_) {
        json space_json = json::object();
        for (const auto& [key, fields] : keys) {
            space_json[key] = fields;
        }
        aggs[space] = space_json;
    }
    snap["aggregates"] = aggs;
    snap["integrity"] = state_hash();
    return snap;
}

PlatformRegistry PlatformRegistry::restore(const json& snap) {
    PlatformRegistry reg;
    reg.version_ = snap.at("version").get<uint64_t>();
    reg.control_ = snap.at("control").get<std::map<std::string, json>>();
    reg.records_ = snap.at("records").get<std::map<std::string, std::map<std::string, json>>>();
    reg.ledgers_ = snap.at("ledgers").get<std::map<std::string, std::vector<json>>>();
    for (const auto& [space, keys] : snap.at("aggregates").items()) {
        for (const auto& [key, fields] : keys.items()) {
            for (const auto& [field, value] : fields.items()) {
                double v = value.get<double>();
                reg.aggregates_[space][key][field] = v;
                reg.cache_.bump(space, key, field, v);
            }
        }
    }
    if (snap.contains("integrity") &&
        snap.at("integrity").get<uint64_t>() != reg.state_hash()) {
        throw CorruptLogError("snapshot integrity hash mismatch");
    }
    return reg;
}

uint64_t PlatformRegistry::state_hash() const {
    uint64_t h = 1469598103934665603ULL;
    h = fnv1a_u64(version_, h);
    auto eat_json = [&h](const json& j) { h = fnv1a(j.dump(), h); };
    for (const auto& [k, v] : control_) {
        h = fnv1a(k, h);
        eat_json(v);
    }
    for (const auto& [space, keys] : aggregates_) {
        h = fnv1a(space, h);
        for (const auto& [key, fields] : keys) {
            h = fnv1a(key, h);
            for (const auto& [field, value] : fields) {
                h = fnv1a(field, h);
                eat_json(json(value));
            }
        }
    }
    for (const auto& [space, recs] : records_) {
        h = fnv1a(space, h);
        for (const auto& [key, value] : recs) {
            h = fnv1a(key, h);
            eat_json(value);
        }
    }
    for (const auto& [name, entries] : ledgers_) {
        h = fnv1a(name, h);
        for (const json& e : entries) eat_json(e);
    }
    return mix64(h);
}

} // namespace svsim::platform
