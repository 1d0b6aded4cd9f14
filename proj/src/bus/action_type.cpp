#include "svsim/bus/action_type.hpp"

#include <string>

#include "svsim/errors.hpp"

namespace svsim::bus {

std::string_view to_string(ActionType a) {
    switch (a) {
#define X(name, cat)          \
    case ActionType::name:    \
        return #name;
        SVSIM_ACTION_TYPES(X)
#undef X
    }
    return "UNKNOWN";
}

ActionCategory category_of(ActionType a) {
    switch (a) {
#define X(name, cat)          \
    case ActionType::name:    \
        return ActionCategory::cat;
        SVSIM_ACTION_TYPES(X)
#undef X
    }
    return ActionCategory::consumption;
}

ActionType action_from_string(std::string_view name) {
#define X(n, cat)                      \
    if (name == #n) return ActionType::n;
    SVSIM_ACTION_TYPES(X)
#undef X
    throw RegistrationError("unknown action type: " + std::string(name));
}

const std::vector<ActionType>& all_action_types() {
    static const std::vector<ActionType> all = [] {
        std::vector<ActionType> v;
#define X(name, cat) v.push_back(ActionType::name);
        SVSIM_ACTION_TYPES(X)
#undef X
        return v;
    }();
    return all;
}

} // namespace svsim::bus
