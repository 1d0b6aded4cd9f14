#include "svsim/bus/event_type.hpp"

#include <string>

#include "svsim/errors.hpp"

namespace svsim::bus {

std::string_view to_string(EventType e) {
    switch (e) {
#define X(name, cat)         \
    case EventType::name:    \
        return #name;
        SVSIM_EVENT_TYPES(X)
#undef X
    }
    return "UNKNOWN";
}

EventSourceCategory source_category_of(EventType e) {
    switch (e) {
#define X(name, cat)         \
    case EventType::name:    \
        return EventSourceCategory::cat;
        SVSIM_EVENT_TYPES(X)
#undef X
    }
    return EventSourceCategory::platform_broadcast;
}

EventType event_from_string(std::string_view name) {
#define X(n, cat)                     \
    if (name == #n) return EventType::n;
    SVSIM_EVENT_TYPES(X)
#undef X
    throw RegistrationError("unknown event type: " + std::string(name));
}

const std::vector<EventType>& all_event_types() {
    static const std::vector<EventType> all = [] {
        std::vector<EventType> v;
#define X(name, cat) v.push_back(EventType::name);
        SVSIM_EVENT_TYPES(X)
#undef X
        return v;
    }();
    return all;
}

} // namespace svsim::bus
