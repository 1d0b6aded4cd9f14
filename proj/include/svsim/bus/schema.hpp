/**
 * Per-event payload schemas. Every published payload is validated against
 * the registry before it is logged, so the append-only log stays replayable
 * and self-describing. The registry is a data table; export_json() emits it
 * for external tooling and for schema conformance tests.
 */

#ifndef SVSIM_BUS_SCHEMA_HPP
#define SVSIM_BUS_SCHEMA_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "svsim/bus/event_type.hpp"

namespace svsim::bus {

using Payload = nlohmann::json;

enum class FieldKind : uint8_t { integer, real, text, boolean };

struct FieldSpec {
    std::string name;
    FieldKind kind;
};

struct EventSchema {
    EventType type;
    std::vector<FieldSpec> required;
};

class SchemaRegistry {
public:
    static const SchemaRegistry& instance();

    const EventSchema& schema_for(EventType type) const;

    /// Throws PayloadError naming the first missing or mistyped field.
    void validate(EventType type, const Payload& payload) const;

    /// Full registry as JSON (event -> [{name, kind}...]).
    nlohmann::json export_json() const;

private:
    SchemaRegistry();
    std::vector<EventSchema> schemas_;
};

} // namespace svsim::bus

#endif // SVSIM_BUS_SCHEMA_HPP
