/**
 * Unified decision-service optimizer: routes schema-constrained requests
 * through live / cached / surrogate tiers under a budget, batches live
 * submissions, caches validated results, and degrades progressively as
 * utilization crosses the configured thresholds.
 */

#ifndef SVSIM_DECISION_OPTIMIZER_HPP
#define SVSIM_DECISION_OPTIMIZER_HPP

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svsim/bus/event_bus.hpp"
#include "svsim/decision/budget.hpp"
#include "svsim/decision/cache.hpp"
#include "svsim/decision/types.hpp"
#include "svsim/rng.hpp"

namespace svsim::decision {

struct LivePrompt {
    Task task = Task::COMMENT;
    std::string prompt;
    std::string model_id;
    double temperature = 0.7;
    json context; // original structured payload; fixture clients key off it
};

/// Pluggable external-inference interface. Implementations must be safe to
/// call sequentially; nullopt signals a transport failure.
class LiveClient {
public:
    virtual ~LiveClient() = default;
    virtual std::optional<std::string> complete(const LivePrompt& prompt) = 0;
    /// One round trip per group; default loops over complete().
    virtual std::vector<std::optional<std::string>> complete_batch(
        const std::vector<LivePrompt>& prompts);
};

/// Deterministic stand-in for a live endpoint: returns schema-valid JSON
/// derived from the request context. Supports malformed-response injection
/// for fallback tests. Records batch sizes for batching assertions.
class FixtureClient : public LiveClient {
public:
    std::optional<std::string> complete(const LivePrompt& prompt) override;
    std::vector<std::optional<std::string>> complete_batch(
        const std::vector<LivePrompt>& prompts) override;

    void fail_task(Task task) { failing_tasks_.insert(task); }
    void malform_task(Task task) { malformed_tasks_.insert(task); }

    std::vector<std::size_t> batch_sizes;
    std::size_t calls = 0;

private:
    std::set<Task> failing_tasks_;
    std::set<Task> malformed_tasks_;
};

/// Minimal chat-completions HTTP client (timeout, one retry). Configured via
/// endpoint/api-key; never used by tests, which run fixture or surrogate.
class HttpLiveClient : public LiveClient {
public:
    HttpLiveClient(std::string endpoint, std::string api_key, int timeout_seconds = 30);
    std::optional<std::string> complete(const LivePrompt& prompt) override;

private:
    std::string endpoint_;
    std::string api_key_;
    int timeout_seconds_;
};

struct DecisionConfig {
    double budget_cap = 25.0;
    // Degradation thresholds (strictly above forces surrogate).
    double comment_threshold = 0.80;
    double persona_threshold = 0.95;
    double default_threshold = 0.90;
    std::size_t batch_max = 50;
    int64_t flush_window_steps = 1;
    std::map<std::string, double> price_per_call = {{"gpt-4-turbo", 0.04},
                                                    {"gpt-3.5-turbo", 0.002}};
    bool comment_live_allowed = false; // surrogate-only in the standard configuration
    std::string cache_path;            // empty = memory-only cache

    double threshold_for(Task task) const;
    double price_for(const std::string& model_id) const;
};

class DecisionOptimizer {
public:
    DecisionOptimizer(DecisionConfig config, std::unique_ptr<LiveClient> client,
                      bus::EventBus* bus, uint64_t master_seed);

    /// Tier selection for the request under the current budget and cache.
    Tier route(const DecisionRequest& request) const;

    /// Executes the request on its routed tier. Malformed or failed live
    /// responses fall through to the surrogate; the call never blocks the
    /// simulation. Results always satisfy validate_result.
    DecisionResult submit(const DecisionRequest& request);

    /// Batched path: queue now, resolve at the next flush.
    void enqueue(DecisionRequest request, int64_t step);

    /// Resolves queued requests in submission order when the batch is full,
    /// the flush window expired, or force is set. Live-routed requests are
    /// grouped into batches of at most batch_max.
    std::vector<DecisionResult> flush(int64_t step, bool force = false);

    std::size_t pending() const { return queue_.size(); }

    const BudgetTracker& budget() const { return budget_; }
    const DecisionCache& cache() const { return cache_; }
    bool live_configured() const { return client_ != nullptr; }
    void set_step(int64_t step) { now_step_ = step; }
    json spend_report() const;

private:
    DecisionResult finish_surrogate(const DecisionRequest& request);
    DecisionResult adopt_live_payload(const DecisionRequest& request, const std::string& raw,
                                      double cost);
    void note_threshold_crossings(Task task, double before, double after);
    void publish_budget_exceeded();
    LivePrompt make_prompt(const DecisionRequest& request) const;

    DecisionConfig config_;
    std::unique_ptr<LiveClient> client_;
    bus::EventBus* bus_;
    BudgetTracker budget_;
    DecisionCache cache_;
    uint64_t master_seed_;
    int64_t now_step_ = 0;
    bool exceeded_published_ = false;
    std::set<std::string> crossed_; // latched "task@threshold" notifications

    struct Pending {
        DecisionRequest request;
        int64_t enqueued_step;
    };
    std::deque<Pending> queue_;
};

/// Prompt text assembled from the task template and the structured payload.
std::string assemble_prompt(const DecisionRequest& request);

} // namespace svsim::decision

#endif // SVSIM_DECISION_OPTIMIZER_HPP
