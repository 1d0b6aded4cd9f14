#include "svsim/decision/cache.hpp"

#include <fstream>

#include "svsim/rng.hpp"

namespace svsim::decision {

std::string cache_key(const DecisionRequest& request) {
    json canonical;
    canonical["task"] = std::string(to_string(request.task));
    canonical["prompt"] = request.prompt_payload;
    canonical["model"] = request.model_id.empty() ? default_model(request.task) : request.model_id;
    canonical["temperature"] =
        request.temperature < 0.0 ? default_temperature(request.task) : request.temperature;
    uint64_t h = mix64(fnv1a(canonical.dump()));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

void DecisionCache::open(const std::string& path) {
    path_ = path;
    if (path_.empty()) return;
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object()) continue;
        CacheEntry entry;
        entry.key = record.value("key", "");
        if (entry.key.empty()) continue;
        entry.task = task_from_string(record.value("task", "COMMENT"));
        entry.result = record.value("result", json::object());
        entry.created_at = record.value("created_at", int64_t{0});
        entries_[entry.key] = std::move(entry);
    }
}

std::optional<CacheEntry> DecisionCache::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void DecisionCache::put(CacheEntry entry) {
    if (path_.empty()) {
        entries_[entry.key] = std::move(entry);
        return;
    }
    std::ofstream out(path_, std::ios::app);
    if (out) {
        json record{{"key", entry.key},
                    {"task", std::string(to_string(entry.task))},
                    {"result", entry.result},
                    {"created_at", entry.created_at}};
        out << record.dump() << '\n';
    }
    entries_[entry.key] = std::move(entry);
}

} // namespace svsim::decision
