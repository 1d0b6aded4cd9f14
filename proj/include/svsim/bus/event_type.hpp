/**
 * Typed cross-twin event taxonomy: 23 members covering user/session intents,
 * interaction outcomes and item updates, and platform-side governance and
 * instrumentation signals.
 */

#ifndef SVSIM_BUS_EVENT_TYPE_HPP
#define SVSIM_BUS_EVENT_TYPE_HPP

#include <cstdint>
#include <string_view>
#include <vector>

namespace svsim::bus {

enum class EventSourceCategory : uint8_t {
    user_to_interaction,
    interaction_to_content_user,
    platform_broadcast,
};

// X(name, source_category)
#define SVSIM_EVENT_TYPES(X)                                   \
    X(SESSION_STARTED, user_to_interaction)                    \
    X(SESSION_ENDED, user_to_interaction)                      \
    X(ACTION_SUBMITTED, user_to_interaction)                   \
    X(FEED_REQUESTED, user_to_interaction)                     \
    X(VIDEO_WATCHED, interaction_to_content_user)              \
    X(VIDEO_SKIPPED, interaction_to_content_user)              \
    X(VIDEO_ENGAGED, interaction_to_content_user)              \
    X(VIDEO_SHARED, interaction_to_content_user)               \
    X(COMMENT_POSTED, interaction_to_content_user)             \
    X(GIFT_SENT, interaction_to_content_user)                  \
    X(FOLLOW_CHANGED, interaction_to_content_user)             \
    X(PREFERENCE_UPDATED, interaction_to_content_user)         \
    X(CONTENT_CREATED, platform_broadcast)                     \
    X(FEED_SERVED, platform_broadcast)                         \
    X(STAGE_TRANSITIONED, platform_broadcast)                  \
    X(VIDEO_GOES_VIRAL, platform_broadcast)                    \
    X(TREND_UPDATED, platform_broadcast)                       \
    X(TREND_FORECASTED, platform_broadcast)                    \
    X(GOVERNANCE_ACTION_APPLIED, platform_broadcast)           \
    X(CAMPAIGN_PLANNED, platform_broadcast)                    \
    X(BUDGET_THRESHOLD_CROSSED, platform_broadcast)            \
    X(BUDGET_EXCEEDED, platform_broadcast)                     \
    X(PURCHASE_COMPLETED, platform_broadcast)

enum class EventType : uint8_t {
#define X(name, cat) name,
    SVSIM_EVENT_TYPES(X)
#undef X
};

constexpr std::size_t kEventTypeCount = 23;

std::string_view to_string(EventType e);
EventSourceCategory source_category_of(EventType e);
EventType event_from_string(std::string_view name); // throws RegistrationError

const std::vector<EventType>& all_event_types();

} // namespace svsim::bus

#endif // SVSIM_BUS_EVENT_TYPE_HPP
