/**
 * Task envelopes for the decision-service layer: schema-constrained requests
 * routed through live / cached / surrogate execution tiers under a budget.
 */

#ifndef SVSIM_DECISION_TYPES_HPP
#define SVSIM_DECISION_TYPES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace svsim::decision {

using json = nlohmann::json;

enum class Task : uint8_t {
    PERSONA,
    CAPTION,
    COMMENT,
    CAMPAIGN,
    TREND_PREDICTION,
    ACTION_SELECTION,
};

enum class Tier : uint8_t { live, cached, surrogate };

std::string_view to_string(Task t);
std::string_view to_string(Tier t);
Task task_from_string(std::string_view name);

struct DecisionRequest {
    Task task = Task::COMMENT;
    json prompt_payload;       // structured context, validated per task
    std::string model_id;      // empty -> task default model
    double temperature = -1.0; // negative -> task default
    std::string requester;     // twin + entity id, e.g. "user/42"
};

struct DecisionResult {
    Task task = Task::COMMENT;
    Tier tier = Tier::surrogate;
    json payload;      // validated against the task's output schema
    bool from_cache = false;
    double cost = 0.0; // incremental spend incurred by this request
};

/// Three-day creator roadmap: exactly three entries, day offsets 0/1/2.
struct CampaignPlan {
    struct Entry {
        int day_offset = 0;
        std::string category;
        std::string theme;
        std::vector<std::string> hashtags;
        std::string short_caption;
        std::string live_slot; // empty = none
        std::string cta;
    };
    std::vector<Entry> entries;

    json to_json() const;
    static CampaignPlan from_json(const json& j); // throws PayloadError when malformed
};

struct TrendForecast {
    std::string hashtag; // canonical lowercase key
    double confidence = 0.0;
    std::string rationale;
};

/// Lowercase, '#' stripped, whitespace collapsed to underscores.
std::string canonical_hashtag(std::string_view raw);

/// Throws PayloadError naming the violated constraint.
/// Both surrogate and normalized live outputs must pass identical checks.
void validate_result(Task task, const json& payload);

/// Input-side schema check for request payloads.
void validate_request(const DecisionRequest& request);

/// Default model and temperature per task.
std::string default_model(Task task);
double default_temperature(Task task);

} // namespace svsim::decision

#endif // SVSIM_DECISION_TYPES_HPP
