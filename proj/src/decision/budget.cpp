#include "svsim/decision/budget.hpp"

#include "svsim/errors.hpp"

namespace svsim::decision {

void BudgetTracker::record(Task task, Tier tier, double cost) {
    if (cost < 0.0) {
        throw DomainError("budget: negative cost");
    }
    if (tier != Tier::live && cost != 0.0) {
        throw DomainError("budget: cached/surrogate executions are free");
    }
    if (spent_total_ + cost > cap_ + 1e-12) {
        throw DomainError("budget: spend would breach the cap");
    }
    spent_total_ += cost;
    by_task_[std::string(to_string(task))] += cost;
    by_tier_[std::string(to_string(tier))] += cost;
}

double BudgetTracker::spent_by_task(Task task) const {
    auto it = by_task_.find(std::string(to_string(task)));
    return it == by_task_.end() ? 0.0 : it->second;
}

double BudgetTracker::spent_by_tier(Tier tier) const {
    auto it = by_tier_.find(std::string(to_string(tier)));
    return it == by_tier_.end() ? 0.0 : it->second;
}

json BudgetTracker::report() const {
    return json{{"cap", cap_},
                {"spent_total", spent_total_},
                {"utilization", utilization()},
                {"by_task", by_task_},
                {"by_tier", by_tier_}};
}

} // namespace svsim::decision
