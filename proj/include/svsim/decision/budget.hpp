#ifndef SVSIM_DECISION_BUDGET_HPP
#define SVSIM_DECISION_BUDGET_HPP

#include <map>
#include <string>

#include "svsim/decision/types.hpp"

namespace svsim::decision {

/**
 * Spend accounting by task and tier. The cap is never breached: callers must
 * check can_spend before routing to the live tier; record() throws on a
 * breach attempt and on nonzero cached/surrogate cost.
 */
class BudgetTracker {
public:
    explicit BudgetTracker(double cap_usd = 0.0) : cap_(cap_usd) {}

    double cap() const { return cap_; }
    double spent_total() const { return spent_total_; }

    /// spent / cap; a zero cap counts as fully utilized.
    double utilization() const {
        return cap_ > 0.0 ? spent_total_ / cap_ : 1.0;
    }

    bool can_spend(double cost) const { return spent_total_ + cost <= cap_; }

    /// Throws DomainError on negative cost, nonzero non-live cost, or breach.
    void record(Task task, Tier tier, double cost);

    double spent_by_task(Task task) const;
    double spent_by_tier(Tier tier) const;

    json report() const;

private:
    double cap_;
    double spent_total_ = 0.0;
    std::map<std::string, double> by_task_;
    std::map<std::string, double> by_tier_;
};

} // namespace svsim::decision

#endif // SVSIM_DECISION_BUDGET_HPP
