#include "svsim/decision/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "svsim/errors.hpp"

namespace svsim::decision {

std::string_view to_string(Task t) {
    switch (t) {
        case Task::PERSONA: return "PERSONA";
        case Task::CAPTION: return "CAPTION";
        case Task::COMMENT: return "COMMENT";
        case Task::CAMPAIGN: return "CAMPAIGN";
        case Task::TREND_PREDICTION: return "TREND_PREDICTION";
        case Task::ACTION_SELECTION: return "ACTION_SELECTION";
    }
    return "?";
}

std::string_view to_string(Tier t) {
    switch (t) {
        case Tier::live: return "live";
        case Tier::cached: return "cached";
        case Tier::surrogate: return "surrogate";
    }
    return "?";
}

Task task_from_string(std::string_view name) {
    for (Task t : {Task::PERSONA, Task::CAPTION, Task::COMMENT, Task::CAMPAIGN,
                   Task::TREND_PREDICTION, Task::ACTION_SELECTION}) {
        if (name == to_string(t)) return t;
    }
    throw RegistrationError("unknown decision task: " + std::string(name));
}

std::string default_model(Task task) {
    switch (task) {
        case Task::PERSONA:
        case Task::CAMPAIGN:
        case Task::TREND_PREDICTION:
            return "gpt-4-turbo"; // high-complexity reasoning tasks
        case Task::CAPTION:
        case Task::COMMENT:
        case Task::ACTION_SELECTION:
            return "gpt-3.5-turbo"; // high-volume, low-latency tasks
    }
    return "gpt-3.5-turbo";
}

double default_temperature(Task task) {
    switch (task) {
        case Task::PERSONA: return 1.0;
        case Task::CAMPAIGN: return 0.7;
        case Task::TREND_PREDICTION: return 0.4;
        case Task::CAPTION: return 0.7;
        case Task::COMMENT: return 0.9;
        case Task::ACTION_SELECTION: return 0.7;
    }
    return 0.7;
}

std::string canonical_hashtag(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        unsigned char u = static_cast<unsigned char>(c);
        if (c == '#') continue;
        if (std::isspace(u)) {
            if (!out.empty() && out.back() != '_') out.push_back('_');
            continue;
        }
        out.push_back(static_cast<char>(std::tolower(u)));
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

json CampaignPlan::to_json() const {
    json entries_json = json::array();
    for (const Entry& e : entries) {
        entries_json.push_back({{"day_offset", e.day_offset},
                                {"category", e.category},
                                {"theme", e.theme},
                                {"hashtags", e.hashtags},
                                {"short_caption", e.short_caption},
                                {"live_slot", e.live_slot},
                                {"cta", e.cta}});
    }
    return json{{"entries", entries_json}};
}

CampaignPlan CampaignPlan::from_json(const json& j) {
    validate_result(Task::CAMPAIGN, j);
    CampaignPlan plan;
    for (const json& e : j.at("entries")) {
        Entry entry;
        entry.day_offset = e.at("day_offset").get<int>();
        entry.category = e.at("category").get<std::string>();
        entry.theme = e.at("theme").get<std::string>();
        for (const json& h : e.at("hashtags")) entry.hashtags.push_back(h.get<std::string>());
        entry.short_caption = e.at("short_caption").get<std::string>();
        entry.live_slot = e.value("live_slot", std::string());
        entry.cta = e.at("cta").get<std::string>();
        plan.entries.push_back(std::move(entry));
    }
    return plan;
}

namespace {

void require(bool cond, Task task, const char* what) {
    if (!cond) {
        throw PayloadError(std::string(to_string(task)) + " result: " + what);
    }
}

bool is_string_array(const json& j, std::size_t min_len = 0) {
    if (!j.is_array() || j.size() < min_len) return false;
    return std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_string(); });
}

} // namespace

void validate_result(Task task, const json& p) {
    require(p.is_object(), task, "payload must be an object");
    switch (task) {
        case Task::PERSONA: {
            require(p.contains("bio") && p["bio"].is_string() && !p["bio"].empty(), task,
                    "bio missing");
            require(p.contains("core_traits") && is_string_array(p["core_traits"]) &&
                        p["core_traits"].size() == 5,
                    task, "core_traits must be 5 adjectives");
            require(p.contains("viewing_preferences") && p["viewing_preferences"].is_string(), task,
                    "viewing_preferences missing");
            require(p.contains("creation_style") && p["creation_style"].is_string(), task,
                    "creation_style missing");
            break;
        }
        case Task::CAPTION: {
            require(p.contains("title") && p["title"].is_string() && !p["title"].empty(), task,
                    "title missing");
            require(p.contains("description") && p["description"].is_string(), task,
                    "description missing");
            require(p.contains("hashtags") && is_string_array(p["hashtags"], 1), task,
                    "hashtags must be a non-empty string list");
            break;
        }
        case Task::COMMENT: {
            require(p.contains("text") && p["text"].is_string() && !p["text"].empty(), task,
                    "text missing");
            break;
        }
        case Task::CAMPAIGN: {
            require(p.contains("entries") && p["entries"].is_array() && p["entries"].size() == 3,
                    task, "exactly three daily entries required");
            std::set<int> offsets;
            for (const json& e : p["entries"]) {
                require(e.is_object(), task, "entry must be an object");
                require(e.contains("day_offset") && e["day_offset"].is_number_integer(), task,
                        "day_offset missing");
                int off = e["day_offset"].get<int>();
                require(off >= 0 && off <= 2, task, "day_offset out of range");
                offsets.insert(off);
                require(e.contains("category") && e["category"].is_string(), task,
                        "category missing");
                require(e.contains("theme") && e["theme"].is_string(), task, "theme missing");
                require(e.contains("hashtags") && is_string_array(e["hashtags"]), task,
                        "hashtags missing");
                require(e.contains("short_caption") && e["short_caption"].is_string(), task,
                        "short_caption missing");
                require(e.contains("cta") && e["cta"].is_string() && !e["cta"].empty(), task,
                        "cta missing");
                if (e.contains("live_slot")) {
                    require(e["live_slot"].is_string() || e["live_slot"].is_null(), task,
                            "live_slot must be string or null");
                }
            }
            require(offsets == std::set<int>{0, 1, 2}, task, "day_offsets must be {0,1,2}");
            break;
        }
        case Task::TREND_PREDICTION: {
            require(p.contains("forecasts") && p["forecasts"].is_array(), task,
                    "forecasts missing");
            for (const json& f : p["forecasts"]) {
                require(f.is_object() && f.contains("hashtag") && f["hashtag"].is_string(), task,
                        "forecast hashtag missing");
                std::string tag = f["hashtag"].get<std::string>();
                require(!tag.empty() && tag == canonical_hashtag(tag), task,
                        "hashtag not in canonical form");
                require(f.contains("confidence") && f["confidence"].is_number(), task,
                        "confidence missing");
                double c = f["confidence"].get<double>();
                require(c >= 0.0 && c <= 1.0, task, "confidence outside [0,1]");
                require(f.contains("rationale") && f["rationale"].is_string(), task,
                        "rationale missing");
            }
            break;
        }
        case Task::ACTION_SELECTION: {
            require(p.contains("action") && p["action"].is_string() && !p["action"].empty(), task,
                    "action missing");
            break;
        }
    }
}

void validate_request(const DecisionRequest& request) {
    const json& p = request.prompt_payload;
    if (!p.is_object()) {
        throw PayloadError(std::string(to_string(request.task)) +
                           " request: payload must be an object");
    }
    auto need = [&](const char* field) {
        if (!p.contains(field)) {
            throw PayloadError(std::string(to_string(request.task)) +
                               " request: missing field '" + field + "'");
        }
    };
    switch (request.task) {
        case Task::PERSONA:
            need("tier");
            need("domain");
            break;
        case Task::CAPTION:
            need("archetype");
            break;
        case Task::COMMENT:
            need("content_id");
            break;
        case Task::CAMPAIGN:
            need("creator_id");
            need("domain");
            break;
        case Task::TREND_PREDICTION:
            need("series");
            break;
        case Task::ACTION_SELECTION:
            need("energy");
            need("boredom");
            need("feed_remaining");
            break;
    }
}

} // namespace svsim::decision
