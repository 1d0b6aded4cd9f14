/**
 * Report emission: per-condition CSV table, summary JSON, and the three SVG
 * figures - creator-earnings distribution by planner strategy, adoption-rate
 * sweep (inequality and revenue on dual axes), and the trend-lifecycle
 * series with the forecast overlay.
 */

#ifndef SVSIM_EXP_REPORT_HPP
#define SVSIM_EXP_REPORT_HPP

#include <string>
#include <vector>

#include "svsim/exp/grid.hpp"

namespace svsim::exp {

/// conditions.csv + report.json under out_dir/<grid>/.
void write_grid_report(GridKind kind, const std::vector<ConditionReport>& reports,
                       const std::string& out_dir);

/// Round-trips exactly: numeric cells are shortest-round-trip formatted.
std::string conditions_csv(const std::vector<ConditionReport>& reports);
nlohmann::json report_json(GridKind kind, const std::vector<ConditionReport>& reports);

/// Per-creator gift revenue from a persisted run's event log.
std::map<int64_t, double> creator_earnings(const std::string& run_dir);

/// Earnings histogram: one overlaid series per strategy level.
void write_earnings_figure(const std::vector<ConditionReport>& reports,
                           const std::string& svg_path);

/// Adoption sweep: gift inequality (left axis) and total revenue (right).
void write_adoption_figure(const std::vector<ConditionReport>& reports,
                           const std::string& svg_path);

/// One run's trend lifecycle: interaction volume bars for the focus hashtag,
/// smoothed trend score line, forecast markers. The focus tag is the most
/// forecasted hashtag, falling back to the busiest one.
void write_trend_figure(const std::string& run_dir, const std::string& svg_path);

} // namespace svsim::exp

#endif // SVSIM_EXP_REPORT_HPP
