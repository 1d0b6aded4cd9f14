#include "svsim/bus/schema.hpp"

#include "svsim/errors.hpp"

namespace svsim::bus {

namespace {

const char* kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::integer: return "integer";
        case FieldKind::real: return "real";
        case FieldKind::text: return "text";
        case FieldKind::boolean: return "boolean";
    }
    return "?";
}

bool kind_matches(FieldKind k, const nlohmann::json& v) {
    switch (k) {
        case FieldKind::integer: return v.is_number_integer();
        case FieldKind::real: return v.is_number(); // integral literals admissible for reals
        case FieldKind::text: return v.is_string();
        case FieldKind::boolean: return v.is_boolean();
    }
    return false;
}

} // namespace

SchemaRegistry::SchemaRegistry() {
    using FK = FieldKind;
    auto add = [this](EventType t, std::vector<FieldSpec> fields) {
        schemas_.push_back(EventSchema{t, std::move(fields)});
    };

    add(EventType::SESSION_STARTED, {{"user_id", FK::integer}});
    add(EventType::SESSION_ENDED,
        {{"user_id", FK::integer}, {"items_viewed", FK::integer}, {"reason", FK::text}});
    add(EventType::ACTION_SUBMITTED, {{"user_id", FK::integer}, {"action", FK::text}});
    add(EventType::FEED_REQUESTED, {{"user_id", FK::integer}});

    add(EventType::VIDEO_WATCHED,
        {{"user_id", FK::integer},
         {"content_id", FK::integer},
         {"watch_time", FK::real},
         {"completion_rate", FK::real},
         {"is_skipped", FK::boolean}});
    add(EventType::VIDEO_SKIPPED,
        {{"user_id", FK::integer},
         {"content_id", FK::integer},
         {"watch_time", FK::real},
         {"completion_rate", FK::real},
         {"is_skipped", FK::boolean}});
    add(EventType::VIDEO_ENGAGED,
        {{"user_id", FK::integer},
         {"content_id", FK::integer},
         {"engagement_type", FK::text},
         {"completion_rate", FK::real}});
    add(EventType::VIDEO_SHARED,
        {{"user_id", FK::integer}, {"content_id", FK::integer}, {"parent_sharer_id", FK::integer}});
    add(EventType::COMMENT_POSTED,
        {{"user_id", FK::integer}, {"content_id", FK::integer}, {"text", FK::text}});
    add(EventType::GIFT_SENT,
        {{"user_id", FK::integer},
         {"creator_id", FK::integer},
         {"content_id", FK::integer},
         {"amount", FK::real}});
    add(EventType::FOLLOW_CHANGED,
        {{"follower_id", FK::integer}, {"creator_id", FK::integer}, {"following", FK::boolean}});
    add(EventType::PREFERENCE_UPDATED, {{"user_id", FK::integer}, {"direction", FK::text}});

    add(EventType::CONTENT_CREATED,
        {{"content_id", FK::integer},
         {"creator_id", FK::integer},
         {"archetype", FK::text},
         {"duration", FK::real},
         {"hook_strength", FK::real},
         {"quality_score", FK::real},
         {"virality", FK::real},
         {"title", FK::text},
         {"description", FK::text},
         {"hashtags", FK::text},
         {"visual_keywords", FK::text},
         {"audio_keywords", FK::text}});
    add(EventType::FEED_SERVED,
        {{"user_id", FK::integer}, {"content_ids", FK::text}, {"feed_size", FK::integer}});
    add(EventType::STAGE_TRANSITIONED,
        {{"content_id", FK::integer},
         {"from_stage", FK::text},
         {"to_stage", FK::text},
         {"reason", FK::text},
         {"engagement_rate", FK::real},
         {"completion_mean", FK::real},
         {"velocity", FK::real}});
    add(EventType::VIDEO_GOES_VIRAL,
        {{"content_id", FK::integer}, {"velocity", FK::real}, {"completion_mean", FK::real}});
    add(EventType::TREND_UPDATED,
        {{"key", FK::text},
         {"velocity", FK::real},
         {"lifecycle", FK::text},
         {"crossed_gate", FK::boolean}});
    add(EventType::TREND_FORECASTED,
        {{"hashtag", FK::text}, {"confidence", FK::real}, {"source", FK::text}});
    add(EventType::GOVERNANCE_ACTION_APPLIED,
        {{"kind", FK::text},
         {"target", FK::text},
         {"magnitude", FK::real},
         {"guard_result", FK::text},
         {"reason", FK::text},
         {"audit_id", FK::integer}});
    add(EventType::CAMPAIGN_PLANNED,
        {{"creator_id", FK::integer}, {"tick", FK::integer}, {"plan", FK::text}});
    add(EventType::BUDGET_THRESHOLD_CROSSED,
        {{"threshold", FK::real}, {"utilization", FK::real}, {"task", FK::text}});
    add(EventType::BUDGET_EXCEEDED,
        {{"utilization", FK::real}, {"spent", FK::real}, {"cap", FK::real}});
    add(EventType::PURCHASE_COMPLETED,
        {{"user_id", FK::integer},
         {"content_id", FK::integer},
         {"creator_id", FK::integer},
         {"amount", FK::real}});
}

const SchemaRegistry& SchemaRegistry::instance() {
    static const SchemaRegistry reg;
    return reg;
}

const EventSchema& SchemaRegistry::schema_for(EventType type) const {
    return schemas_.at(static_cast<std::size_t>(type));
}

void SchemaRegistry::validate(EventType type, const Payload& payload) const {
    if (!payload.is_object()) {
        throw PayloadError(std::string(to_string(type)) + ": payload must be an object");
    }
    const EventSchema& schema = schema_for(type);
    for (const FieldSpec& field : schema.required) {
        auto it = payload.find(field.name);
        if (it == payload.end()) {
            throw PayloadError(std::string(to_string(type)) + ": missing field '" + field.name +
                               "'");
        }
        if (!kind_matches(field.kind, *it)) {
            throw PayloadError(std::string(to_string(type)) + ": field '" + field.name +
                               "' is not " + kind_name(field.kind));
        }
    }
}

nlohmann::json SchemaRegistry::export_json() const {
    nlohmann::json out = nlohmann::json::object();
    for (const EventSchema& schema : schemas_) {
        nlohmann::json fields = nlohmann::json::array();
        for (const FieldSpec& f : schema.required) {
            fields.push_back({{"name", f.name}, {"kind", kind_name(f.kind)}});
        }
        out[std::string(to_string(schema.type))] = fields;
    }
    return out;
}

} // namespace svsim::bus
