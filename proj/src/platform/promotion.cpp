#include "svsim/platform/promotion.hpp"

#include "svsim/errors.hpp"
#include "svsim/rng.hpp"

namespace svsim::platform {

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::initial: return "initial";
        case Stage::expanded: return "expanded";
        case Stage::viral: return "viral";
        case Stage::limited: return "limited";
    }
    return "?";
}

Stage stage_from_string(std::string_view name) {
    if (name == "initial") return Stage::initial;
    if (name == "expanded") return Stage::expanded;
    if (name == "viral") return Stage::viral;
    if (name == "limited") return Stage::limited;
    throw ConfigError("unknown stage: " + std::string(name));
}

std::optional<StageTransition> evaluate_gate(const StageRecord& record, const GateMetrics& metrics,
                                             const GateConfig& config, int64_t step) {
    (void)step;
    if (record.stage == Stage::viral || record.stage == Stage::limited) {
        return std::nullopt; // absorbing
    }
    if (record.impressions_served < record.impressions_quota) {
        return std::nullopt; // gates evaluate only after the quota is consumed
    }
    StageTransition t;
    t.content_id = record.content_id;
    t.from = record.stage;
    t.metrics = metrics;
    if (record.stage == Stage::initial) {
        if (metrics.engagement_rate > config.engagement_gate) { // strict, boundary fails
            t.to = Stage::expanded;
            t.reason = "engagement above gate";
        } else {
            t.to = Stage::limited;
            t.reason = "engagement at or below gate";
        }
        return t;
    }
    // expanded
    if (metrics.velocity > config.velocity_gate && metrics.completion_mean >= config.completion_gate) {
        t.to = Stage::viral;
        t.viral = true;
        t.reason = "velocity and completion above gates";
    } else {
        t.to = Stage::limited;
        t.reason = "expanded quota consumed without viral signals";
    }
    return t;
}

void PromotionPipeline::attach(bus::EventBus& bus) {
    using bus::EventType;
    if (registry_ != nullptr) {
        registry_->register_platform_handler("platform.promotion");
    }
    bus.subscribe({EventType::CONTENT_CREATED, "platform.promotion", 30},
                  [this](const bus::TypedEvent& e) {
                      admit(e.payload.at("content_id").get<int64_t>(), e.step);
                  });
    for (EventType t : {EventType::VIDEO_WATCHED, EventType::VIDEO_SKIPPED}) {
        bus.subscribe({t, "platform.promotion", 30}, [this](const bus::TypedEvent& e) {
            auto it = records_.find(e.payload.at("content_id").get<int64_t>());
            if (it != records_.end()) {
                it->second.impressions_served += 1;
            }
        });
    }
    bus.subscribe({EventType::STAGE_TRANSITIONED, "platform.promotion", 30},
                  [this](const bus::TypedEvent& e) {
                      StageTransition t;
                      t.content_id = e.payload.at("content_id").get<int64_t>();
                      t.from = stage_from_string(e.payload.at("from_stage").get<std::string>());
                      t.to = stage_from_string(e.payload.at("to_stage").get<std::string>());
                      t.reason = e.payload.at("reason").get<std::string>();
                      t.metrics.engagement_rate = e.payload.value("engagement_rate", 0.0);
                      t.metrics.completion_mean = e.payload.value("completion_mean", 0.0);
                      t.metrics.velocity = e.payload.value("velocity", 0.0);
                      apply_transition(t, e.step);
                  });
}

StageRecord PromotionPipeline::admit(int64_t content_id, int64_t step) {
    auto it = records_.find(content_id);
    if (it != records_.end()) {
        return it->second; // duplicate admit: no-op
    }
    StageRecord record;
    record.content_id = content_id;
    record.stage = Stage::initial;
    record.impressions_quota = config_.initial_quota;
    record.entered_step = step;
    record.amplification = 1.0;
    records_[content_id] = record;
    mirror_to_registry(record);
    return record;
}

std::vector<StageTransition> PromotionPipeline::maintenance(
    int64_t step, const content::ContentStore& store,
    const std::function<double(int64_t)>& velocity_of) {
    std::vector<StageTransition> proposals;
    for (auto& [id, record] : records_) {
        if (record.stage == Stage::viral || record.stage == Stage::limited) continue;
        GateMetrics metrics;
        if (store.contains(id)) {
            const content::ContentProfile& p = store.get(id);
            metrics.engagement_rate = p.engagement_rate;
            metrics.completion_mean = p.completion_mean();
        }
        metrics.velocity = velocity_of ? velocity_of(id) : 0.0;
        record.gate_metrics = metrics;

        std::optional<StageTransition> t = evaluate_gate(record, metrics, config_, step);
        if (!t && record.stage == Stage::expanded && metrics.velocity > config_.velocity_gate &&
            metrics.completion_mean >= config_.completion_gate) {
            // The viral gate fires as soon as the signals sustain; only the
            // limited demotion waits for the quota to be consumed.
            StageTransition early;
            early.content_id = record.content_id;
            early.from = record.stage;
            early.to = Stage::viral;
            early.viral = true;
            early.reason = "velocity and completion above gates";
            early.metrics = metrics;
            t = early;
        }
        if (!t && step - record.entered_step >= config_.stage_timeout_steps) {
            // Starved of impressions: evaluate with the quota requirement
            // waived so the record still reaches an absorbing stage.
            StageRecord timed_out = record;
            timed_out.impressions_quota = timed_out.impressions_served;
            t = evaluate_gate(timed_out, metrics, config_, step);
            if (t) t->reason += " (stage timeout)";
        }
        if (t) proposals.push_back(*t);
    }
    return proposals;
}

void PromotionPipeline::apply_transition(const StageTransition& t, int64_t step) {
    auto it = records_.find(t.content_id);
    if (it == records_.end()) return;
    StageRecord& record = it->second;
    record.stage = t.to;
    record.entered_step = step;
    record.gate_metrics = t.metrics;
    if (t.to == Stage::expanded) {
        record.impressions_quota = config_.expanded_quota;
        record.amplification = 1.0;
    } else if (t.to == Stage::viral) {
        record.amplification = config_.amplification_factor;
    } else if (t.to == Stage::limited) {
        record.amplification = 1.0;
    }
    mirror_to_registry(record);
}

void PromotionPipeline::mirror_to_registry(const StageRecord& record) {
    if (registry_ == nullptr) return;
    registry_->commit("platform.promotion",
                      Mutation::put_record(
                          "stage", std::to_string(record.content_id),
                          json{{"stage", std::string(to_string(record.stage))},
                               {"impressions_served", record.impressions_served},
                               {"impressions_quota", record.impressions_quota},
                               {"entered_step", record.entered_step},
                               {"amplification", record.amplification}}));
}

double PromotionPipeline::eligibility_weight(int64_t content_id) const {
    auto it = records_.find(content_id);
    if (it == records_.end()) return 1.0;
    switch (it->second.stage) {
        case Stage::viral: return it->second.amplification;
        case Stage::limited: return config_.limited_trickle;
        default: return 1.0;
    }
}

const StageRecord* PromotionPipeline::record_for(int64_t content_id) const {
    auto it = records_.find(content_id);
    return it == records_.end() ? nullptr : &it->second;
}

uint64_t PromotionPipeline::state_hash() const {
    uint64_t h = 1469598103934665603ULL;
    for (const auto& [id, r] : records_) {
        h = fnv1a_u64(static_cast<uint64_t>(id), h);
        h = fnv1a(to_string(r.stage), h);
        h = fnv1a_u64(static_cast<uint64_t>(r.impressions_served), h);
        h = fnv1a_u64(static_cast<uint64_t>(r.impressions_quota), h);
    }
    return mix64(h);
}

} // namespace svsim::platform
