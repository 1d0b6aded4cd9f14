/**
 * Independent event-log reducer: recomputes the run summary from a raw
 * serialized log with its own bookkeeping, checking the live collector.
 * LLM spend is not derivable from the log; it comes from the spend report.
 */

#ifndef SVSIM_SIM_REDUCER_HPP
#define SVSIM_SIM_REDUCER_HPP

#include <vector>

#include "svsim/bus/event_bus.hpp"
#include "svsim/sim/metrics.hpp"

namespace svsim::sim {

RunSummary reduce_summary(const std::vector<bus::TypedEvent>& log, double llm_spend);

/// Per-content {views, likes, shares} recount over a log prefix (events with
/// seq < limit); the ledger-reconciliation oracle.
std::map<int64_t, std::map<std::string, double>> recount_content_aggregates(
    const std::vector<bus::TypedEvent>& log, uint64_t seq_limit);

/// Per-step interaction counts for one hashtag (trend-series oracle and the
/// lifecycle plot input). Content metadata is resolved from the log itself.
std::map<int64_t, double> hashtag_interaction_series(const std::vector<bus::TypedEvent>& log,
                                                     const std::string& tag);

} // namespace svsim::sim

#endif // SVSIM_SIM_REDUCER_HPP
