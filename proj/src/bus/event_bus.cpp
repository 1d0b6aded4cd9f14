#include "svsim/bus/event_bus.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "svsim/errors.hpp"

namespace svsim::bus {

void EventBus::subscribe(const Subscription& sub, Handler handler) {
    auto& entries = handlers_[static_cast<std::size_t>(sub.event_type)];
    for (const Entry& e : entries) {
        if (e.handler_id == sub.handler_id) {
            throw RegistrationError("duplicate subscription: " +
                                    std::string(to_string(sub.event_type)) + "/" + sub.handler_id);
        }
    }
    entries.push_back(Entry{sub.handler_id, sub.priority, std::move(handler)});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.priority != b.priority) return a.priority < b.priority;
        return a.handler_id < b.handler_id;
    });
}

void EventBus::subscribe(std::string_view event_type_name, const std::string& handler_id,
                         int priority, Handler handler) {
    EventType type = event_from_string(event_type_name); // throws for unknown names
    subscribe(Subscription{type, handler_id, priority}, std::move(handler));
}

uint64_t EventBus::publish(int64_t step, EventType type, const std::string& source,
                           Payload payload) {
    SchemaRegistry::instance().validate(type, payload);
    TypedEvent event;
    event.seq = next_seq();
    event.step = step;
    event.type = type;
    event.source = source;
    event.payload = std::move(payload);
    log_.push_back(event);
    dispatch(log_.back());
    return event.seq;
}

void EventBus::replay(const std::vector<TypedEvent>& log) {
    for (const TypedEvent& event : log) {
        if (event.seq != next_seq()) {
            throw CorruptLogError("replay: seq gap at " + std::to_string(event.seq) +
                                  ", expected " + std::to_string(next_seq()));
        }
        SchemaRegistry::instance().validate(event.type, event.payload);
        log_.push_back(event);
        dispatch(log_.back());
    }
}

void EventBus::dispatch(const TypedEvent& event) {
    const auto& entries = handlers_[static_cast<std::size_t>(event.type)];
    for (const Entry& e : entries) {
        e.fn(event);
    }
}

std::size_t EventBus::handler_count(EventType type) const {
    return handlers_[static_cast<std::size_t>(type)].size();
}

std::string EventBus::event_to_line(const TypedEvent& event) {
    nlohmann::json record;
    record["seq"] = event.seq;
    record["step"] = event.step;
    record["type"] = std::string(to_string(event.type));
    record["source"] = event.source;
    record["payload"] = event.payload;
    return record.dump(); // nlohmann objects are key-sorted: stable bytes
}

TypedEvent EventBus::line_to_event(const std::string& line) {
    nlohmann::json record = nlohmann::json::parse(line);
    TypedEvent event;
    event.seq = record.at("seq").get<uint64_t>();
    event.step = record.at("step").get<int64_t>();
    event.type = event_from_string(record.at("type").get<std::string>());
    event.source = record.at("source").get<std::string>();
    event.payload = record.at("payload");
    return event;
}

void EventBus::write_log(std::ostream& out) const {
    for (const TypedEvent& event : log_) {
        out << event_to_line(event) << '\n';
    }
}

std::vector<TypedEvent> EventBus::read_log(std::istream& in) {
    std::vector<TypedEvent> events;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        events.push_back(line_to_event(line));
    }
    return events;
}

} // namespace svsim::bus
