/**
 * Discrete control interface: the 48 admissible platform actions.
 *
 * The registry spans general social-platform operations (navigation,
 * social-graph updates, posting primitives, group operations, basic
 * commerce) and the content-specific behaviors at the core of the
 * consumption loop. Members outside the simulated workflows are inert:
 * they are registered, routable and logged, but no handler reacts to them
 * in the default configuration.
 */

#ifndef SVSIM_BUS_ACTION_TYPE_HPP
#define SVSIM_BUS_ACTION_TYPE_HPP

#include <cstdint>
#include <string_view>
#include <vector>

namespace svsim::bus {

enum class ActionCategory : uint8_t {
    consumption,
    engagement,
    social,
    navigation,
    creation,
    commerce,
    group,
    live,
};

// X(name, category)
#define SVSIM_ACTION_TYPES(X)            \
    X(WATCH_VIDEO, consumption)          \
    X(SKIP_VIDEO, consumption)           \
    X(REFRESH, consumption)              \
    X(REWATCH_VIDEO, consumption)        \
    X(PAUSE_VIDEO, consumption)          \
    X(RESUME_VIDEO, consumption)         \
    X(LIKE, engagement)                  \
    X(UNLIKE, engagement)                \
    X(SHARE, engagement)                 \
    X(COMMENT, engagement)               \
    X(REPLY_COMMENT, engagement)         \
    X(LIKE_COMMENT, engagement)          \
    X(DUET, engagement)                  \
    X(STITCH, engagement)                \
    X(FOLLOW, social)                    \
    X(UNFOLLOW, social)                  \
    X(SEND_GIFT, social)                 \
    X(BLOCK_USER, social)                \
    X(UNBLOCK_USER, social)              \
    X(REPORT_USER, social)               \
    X(MENTION_USER, social)              \
    X(SEND_MESSAGE, social)              \
    X(SEARCH_USER, navigation)           \
    X(SEARCH_POSTS, navigation)          \
    X(EXIT, navigation)                  \
    X(OPEN_PROFILE, navigation)          \
    X(VIEW_FOLLOWERS, navigation)        \
    X(BROWSE_HASHTAG, navigation)        \
    X(OPEN_INBOX, navigation)            \
    X(VIEW_TRENDING, navigation)         \
    X(CREATE_VIDEO, creation)            \
    X(DELETE_VIDEO, creation)            \
    X(EDIT_CAPTION, creation)            \
    X(PIN_VIDEO, creation)               \
    X(SAVE_DRAFT, creation)              \
    X(PUBLISH_DRAFT, creation)           \
    X(VIEW_PRODUCT, commerce)            \
    X(ADD_TO_CART, commerce)             \
    X(PURCHASE, commerce)                \
    X(BOOKMARK_PRODUCT, commerce)        \
    X(OPEN_SHOP, commerce)               \
    X(CREATE_GROUP, group)               \
    X(JOIN_GROUP, group)                 \
    X(LEAVE_GROUP, group)                \
    X(POST_IN_GROUP, group)              \
    X(START_LIVE, live)                  \
    X(JOIN_LIVE, live)                   \
    X(LEAVE_LIVE, live)

enum class ActionType : uint8_t {
#define X(name, cat) name,
    SVSIM_ACTION_TYPES(X)
#undef X
};

constexpr std::size_t kActionTypeCount = 48;

std::string_view to_string(ActionType a);
ActionCategory category_of(ActionType a);
ActionType action_from_string(std::string_view name); // throws RegistrationError

/// All registered members, declaration order.
const std::vector<ActionType>& all_action_types();

} // namespace svsim::bus

#endif // SVSIM_BUS_ACTION_TYPE_HPP
