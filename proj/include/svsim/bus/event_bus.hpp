/**
 * Typed publish/subscribe bus with an append-only event log.
 *
 * Publishing validates the payload, appends the event with the next
 * sequence number, and synchronously dispatches to subscribers in
 * ascending (priority, handler_id) order, so the causal order of a run is
 * explicit and bit-exact on replay. Single-writer per simulation instance.
 */

#ifndef SVSIM_BUS_EVENT_BUS_HPP
#define SVSIM_BUS_EVENT_BUS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "svsim/bus/event_type.hpp"
#include "svsim/bus/schema.hpp"

namespace svsim::bus {

struct TypedEvent {
    uint64_t seq = 0;
    int64_t step = 0;
    EventType type = EventType::SESSION_STARTED;
    std::string source; // twin identifier: user | content | interaction | platform | environment
    Payload payload;
};

struct Subscription {
    EventType event_type;
    std::string handler_id;
    int priority = 0;
};

using Handler = std::function<void(const TypedEvent&)>;

class EventBus {
public:
    /// Throws RegistrationError on duplicate (event_type, handler_id).
    void subscribe(const Subscription& sub, Handler handler);

    /// Name-based registration; throws RegistrationError for unknown types.
    void subscribe(std::string_view event_type_name, const std::string& handler_id, int priority,
                   Handler handler);

    /// Validates, logs, dispatches. Returns the assigned seq.
    /// Throws PayloadError without logging when the payload fails its schema.
    uint64_t publish(int64_t step, EventType type, const std::string& source, Payload payload);

    /// Re-dispatches a recorded log through this bus's subscriptions,
    /// appending to the local log. The incoming events must continue the
    /// local log's seq numbering contiguously; a gap throws CorruptLogError.
    void replay(const std::vector<TypedEvent>& log);

    const std::vector<TypedEvent>& log() const { return log_; }
    uint64_t next_seq() const { return static_cast<uint64_t>(log_.size()); }

    std::size_t handler_count(EventType type) const;

    /// One self-describing JSON record per line; byte-stable for equal runs.
    void write_log(std::ostream& out) const;
    static std::string event_to_line(const TypedEvent& event);
    static TypedEvent line_to_event(const std::string& line);
    static std::vector<TypedEvent> read_log(std::istream& in);

private:
    struct Entry {
        std::string handler_id;
        int priority;
        Handler fn;
    };

    void dispatch(const TypedEvent& event);

    std::vector<std::vector<Entry>> handlers_ =
        std::vector<std::vector<Entry>>(kEventTypeCount); // per event type, sorted
    std::vector<TypedEvent> log_;
};

} // namespace svsim::bus

#endif // SVSIM_BUS_EVENT_BUS_HPP
