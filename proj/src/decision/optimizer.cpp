#include "svsim/decision/optimizer.hpp"

#include <algorithm>

#include "svsim/decision/surrogates.hpp"
#include "svsim/errors.hpp"

// httplib pulls in sockets; keep it out of every other translation unit.
#ifndef SVSIM_NO_HTTP
#include <httplib.h>
#endif

namespace svsim::decision {

std::vector<std::optional<std::string>> LiveClient::complete_batch(
    const std::vector<LivePrompt>& prompts) {
    std::vector<std::optional<std::string>> out;
    out.reserve(prompts.size());
    for (const LivePrompt& p : prompts) out.push_back(complete(p));
    return out;
}

// ---------------------------------------------------------------------------
// FixtureClient

std::optional<std::string> FixtureClient::complete(const LivePrompt& prompt) {
    ++calls;
    if (failing_tasks_.count(prompt.task)) return std::nullopt;
    if (malformed_tasks_.count(prompt.task)) return std::string("{\"oops\": tr");

    // Deterministic, schema-valid output derived from the request context.
    // Distinguishable from the surrogate tier by a fixture marker where the
    // schema has free text.
    RngStream rng = RngStream::from_string("fixture|" + prompt.prompt);
    DecisionRequest req;
    req.task = prompt.task;
    req.prompt_payload = prompt.context;
    json out = run_surrogate(req, rng);
    switch (prompt.task) {
        case Task::PERSONA:
            out["bio"] = std::string(out["bio"].get<std::string>()) + " [fixture]";
            break;
        case Task::CAPTION:
            out["description"] = std::string(out["description"].get<std::string>()) + " [fixture]";
            break;
        case Task::CAMPAIGN:
            for (json& e : out["entries"]) {
                e["theme"] = std::string(e["theme"].get<std::string>()) + " [fixture]";
            }
            break;
        default:
            break;
    }
    return out.dump();
}

std::vector<std::optional<std::string>> FixtureClient::complete_batch(
    const std::vector<LivePrompt>& prompts) {
    batch_sizes.push_back(prompts.size());
    return LiveClient::complete_batch(prompts);
}

// ---------------------------------------------------------------------------
// HttpLiveClient

HttpLiveClient::HttpLiveClient(std::string endpoint, std::string api_key, int timeout_seconds)
    : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)),
      timeout_seconds_(timeout_seconds) {}

std::optional<std::string> HttpLiveClient::complete(const LivePrompt& prompt) {
#ifdef SVSIM_NO_HTTP
    (void)prompt;
    return std::nullopt;
#else
    json body{{"model", prompt.model_id},
              {"temperature", prompt.temperature},
              {"response_format", json{{"type", "json_object"}}},
              {"messages", json::array({json{{"role", "user"}, {"content", prompt.prompt}}})}};
    httplib::Client cli(endpoint_);
    cli.set_connection_timeout(timeout_seconds_);
    cli.set_read_timeout(timeout_seconds_);
    httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};

    for (int attempt = 0; attempt < 2; ++attempt) { // one retry on transport failure
        auto res = cli.Post("/v1/chat/completions", headers, body.dump(), "application/json");
        if (!res || res->status != 200) continue;
        json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded()) continue;
        try {
            return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception&) {
            continue;
        }
    }
    return std::nullopt;
#endif
}

// ---------------------------------------------------------------------------
// Prompt assembly

std::string assemble_prompt(const DecisionRequest& request) {
    const json& p = request.prompt_payload;
    std::string out = "You are the decision service of a short-video platform simulator.\n";
    switch (request.task) {
        case Task::PERSONA:
            out += "Write a detailed persona for a " + p.value("tier", "casual") +
                   " creator focused on " + p.value("domain", "LIFESTYLE") +
                   ". Return a JSON object with fields: bio, core_traits (exactly 5 "
                   "adjectives), viewing_preferences, creation_style.";
            break;
        case Task::CAPTION:
            out += "Write a platform-ready caption for a new " + p.value("archetype", "LIFESTYLE") +
                   " video. Current trending tags: " + p.value("trending", json::array()).dump() +
                   ". Return JSON with fields: title, description, hashtags (list).";
            break;
        case Task::COMMENT:
            out += "Write one short viewer comment for video " +
                   std::to_string(p.value("content_id", int64_t{0})) +
                   ". Return JSON with field: text.";
            break;
        case Task::CAMPAIGN:
            out += "Plan the next three days for creator " +
                   std::to_string(p.value("creator_id", int64_t{0})) + " in niche " +
                   p.value("domain", "LIFESTYLE") + ". Recent performance: " +
                   p.value("recent_performance", json::array()).dump() +
                   ". Top trending tags: " + p.value("trending", json::array()).dump() +
                   ". Pick one trending tag worth riding and bridge it to the niche. Return JSON "
                   "{entries: [3 x {day_offset, category, theme, hashtags, short_caption, "
                   "live_slot, cta}]} with day_offset 0, 1, 2.";
            break;
        case Task::TREND_PREDICTION:
            out += "Hashtag velocity series (oldest to current): " +
                   p.value("series", json::object()).dump() +
                   ". Identify hashtags in an early emergence phase; ignore stable or declining "
                   "ones. Return JSON {forecasts: [{hashtag, confidence (0-1), rationale}]}.";
            break;
        case Task::ACTION_SELECTION:
            out += "Select the agent's next action given session context " + p.dump() +
                   ". Return JSON with field: action.";
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// DecisionConfig

double DecisionConfig::threshold_for(Task task) const {
    switch (task) {
        case Task::COMMENT: return comment_threshold;
        case Task::PERSONA: return persona_threshold;
        default: return default_threshold;
    }
}

double DecisionConfig::price_for(const std::string& model_id) const {
    auto it = price_per_call.find(model_id);
    return it == price_per_call.end() ? 0.01 : it->second;
}

// ---------------------------------------------------------------------------
// DecisionOptimizer

DecisionOptimizer::DecisionOptimizer(DecisionConfig config, std::unique_ptr<LiveClient> client,
                                     bus::EventBus* bus, uint64_t master_seed)
    : config_(std::move(config)), client_(std::move(client)), bus_(bus),
      budget_(config_.budget_cap), master_seed_(master_seed) {
    cache_.open(config_.cache_path);
}

Tier DecisionOptimizer::route(const DecisionRequest& request) const {
    validate_request(request);
    if (cache_.has(cache_key(request))) {
        return Tier::cached;
    }
    if (client_ == nullptr) return Tier::surrogate;
    if (request.task == Task::COMMENT && !config_.comment_live_allowed) return Tier::surrogate;
    double util = budget_.utilization();
    if (util >= 1.0) return Tier::surrogate;
    if (util > config_.threshold_for(request.task)) return Tier::surrogate;
    return Tier::live;
}

LivePrompt DecisionOptimizer::make_prompt(const DecisionRequest& request) const {
    LivePrompt lp;
    lp.task = request.task;
    lp.prompt = assemble_prompt(request);
    lp.model_id = request.model_id.empty() ? default_model(request.task) : request.model_id;
    lp.temperature =
        request.temperature < 0.0 ? default_temperature(request.task) : request.temperature;
    lp.context = request.prompt_payload;
    return lp;
}

DecisionResult DecisionOptimizer::finish_surrogate(const DecisionRequest& request) {
    // Surrogate draws come from a stream keyed by the request itself, so the
    // same request yields the same result in any submission order.
    RngStream rng(master_seed_, "surrogate", {static_cast<int64_t>(fnv1a(cache_key(request)))});
    DecisionResult result;
    result.task = request.task;
    result.tier = Tier::surrogate;
    result.payload = run_surrogate(request, rng);
    validate_result(request.task, result.payload); // surrogate defects are hard bugs
    budget_.record(request.task, Tier::surrogate, 0.0);
    return result;
}

DecisionResult DecisionOptimizer::adopt_live_payload(const DecisionRequest& request,
                                                     const std::string& raw, double cost) {
    // Normalization: parse, coerce known shapes, validate. Any failure is a
    // fall-through to the surrogate; the live attempt is still billed.
    double before = budget_.utilization();
    budget_.record(request.task, Tier::live, cost);
    note_threshold_crossings(request.task, before, budget_.utilization());

    json parsed = json::parse(raw, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        return finish_surrogate(request);
    }
    // Canonical coercions before validation.
    if (request.task == Task::TREND_PREDICTION && parsed.contains("forecasts") &&
        parsed["forecasts"].is_array()) {
        for (json& f : parsed["forecasts"]) {
            if (f.contains("hashtag") && f["hashtag"].is_string()) {
                f["hashtag"] = canonical_hashtag(f["hashtag"].get<std::string>());
            }
            if (f.contains("confidence") && f["confidence"].is_number()) {
                f["confidence"] = std::clamp(f["confidence"].get<double>(), 0.0, 1.0);
            }
            if (!f.contains("rationale")) f["rationale"] = "";
        }
    }
    if (request.task == Task::CAMPAIGN && parsed.contains("entries") &&
        parsed["entries"].is_array()) {
        for (json& e : parsed["entries"]) {
            if (e.is_object() && !e.contains("live_slot")) e["live_slot"] = "";
            if (e.is_object() && e.contains("live_slot") && e["live_slot"].is_null()) {
                e["live_slot"] = "";
            }
        }
    }
    try {
        validate_result(request.task, parsed);
    } catch (const PayloadError&) {
        return finish_surrogate(request);
    }

    CacheEntry entry;
    entry.key = cache_key(request);
    entry.task = request.task;
    entry.result = parsed;
    entry.created_at = now_step_;
    cache_.put(std::move(entry));

    DecisionResult result;
    result.task = request.task;
    result.tier = Tier::live;
    result.payload = std::move(parsed);
    result.cost = cost;
    return result;
}

DecisionResult DecisionOptimizer::submit(const DecisionRequest& request) {
    Tier tier = route(request);
    // A task that would otherwise go live but finds the budget consumed is
    // the saturation signal, even if route() already degraded it.
    bool live_admissible = client_ != nullptr &&
                           (request.task != Task::COMMENT || config_.comment_live_allowed);
    if (tier == Tier::surrogate && live_admissible && budget_.utilization() >= 1.0) {
        publish_budget_exceeded();
    }
    if (tier == Tier::cached) {
        auto entry = cache_.get(cache_key(request));
        DecisionResult result;
        result.task = request.task;
        result.tier = Tier::cached;
        result.payload = entry->result;
        result.from_cache = true;
        budget_.record(request.task, Tier::cached, 0.0);
        return result;
    }
    if (tier == Tier::live) {
        LivePrompt lp = make_prompt(request);
        double cost = config_.price_for(lp.model_id);
        if (!budget_.can_spend(cost)) {
            publish_budget_exceeded();
            return finish_surrogate(request);
        }
        std::optional<std::string> raw = client_->complete(lp);
        if (!raw) {
            return finish_surrogate(request); // transport failure: nothing billed
        }
        return adopt_live_payload(request, *raw, cost);
    }
    return finish_surrogate(request);
}

void DecisionOptimizer::enqueue(DecisionRequest request, int64_t step) {
    validate_request(request);
    queue_.push_back(Pending{std::move(request), step});
}

std::vector<DecisionResult> DecisionOptimizer::flush(int64_t step, bool force) {
    bool window_expired =
        !queue_.empty() && step - queue_.front().enqueued_step >= config_.flush_window_steps;
    if (!force && !window_expired && queue_.size() < config_.batch_max) {
        return {};
    }

    std::vector<Pending> pending(queue_.begin(), queue_.end());
    queue_.clear();

    std::vector<DecisionResult> results(pending.size());
    std::vector<std::size_t> live_slots;
    std::vector<LivePrompt> live_prompts;
    std::vector<double> live_costs;

    for (std::size_t i = 0; i < pending.size(); ++i) {
        const DecisionRequest& req = pending[i].request;
        Tier tier = route(req);
        if (tier == Tier::live) {
            LivePrompt lp = make_prompt(req);
            double cost = config_.price_for(lp.model_id);
            if (!budget_.can_spend(cost)) {
                publish_budget_exceeded();
                results[i] = finish_surrogate(req);
                continue;
            }
            live_slots.push_back(i);
            live_prompts.push_back(std::move(lp));
            live_costs.push_back(cost);
        } else if (tier == Tier::cached) {
            results[i] = submit(req); // resolves from cache, free
        } else {
            results[i] = finish_surrogate(req);
        }
    }

    // Grouped live submissions, at most batch_max per round trip,
    // demultiplexed back to requesters in submission order.
    for (std::size_t offset = 0; offset < live_prompts.size(); offset += config_.batch_max) {
        std::size_t count = std::min(config_.batch_max, live_prompts.size() - offset);
        std::vector<LivePrompt> group(live_prompts.begin() + offset,
                                      live_prompts.begin() + offset + count);
        std::vector<std::optional<std::string>> raw = client_->complete_batch(group);
        for (std::size_t j = 0; j < count; ++j) {
            std::size_t slot = live_slots[offset + j];
            const DecisionRequest& req = pending[slot].request;
            if (j < raw.size() && raw[j]) {
                results[slot] = adopt_live_payload(req, *raw[j], live_costs[offset + j]);
            } else {
                results[slot] = finish_surrogate(req);
            }
        }
    }
    return results;
}

void DecisionOptimizer::note_threshold_crossings(Task task, double before, double after) {
    if (bus_ == nullptr) return;
    for (double threshold : {config_.comment_threshold, config_.default_threshold,
                             config_.persona_threshold}) {
        if (before <= threshold && after > threshold) {
            std::string latch = std::to_string(threshold);
            if (crossed_.insert(latch).second) {
                bus_->publish(now_step_, bus::EventType::BUDGET_THRESHOLD_CROSSED, "platform",
                              bus::Payload{{"threshold", threshold},
                                           {"utilization", after},
                                           {"task", std::string(to_string(task))}});
            }
        }
    }
}

void DecisionOptimizer::publish_budget_exceeded() {
    if (exceeded_published_ || bus_ == nullptr) {
        exceeded_published_ = true;
        return;
    }
    exceeded_published_ = true;
    bus_->publish(now_step_, bus::EventType::BUDGET_EXCEEDED, "platform",
                  bus::Payload{{"utilization", budget_.utilization()},
                               {"spent", budget_.spent_total()},
                               {"cap", budget_.cap()}});
}

json DecisionOptimizer::spend_report() const { return budget_.report(); }

} // namespace svsim::decision
