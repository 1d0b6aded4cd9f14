/**
 * Experiment harness: the factorial grids, per-condition config overrides,
 * a worker pool executing one run per (condition, seed), and mean/std
 * aggregation across seeds.
 *
 *   set1     planner strategy x adoption x monetization  (2 x 4 x 2 = 16)
 *   set2     governance strategy x budget tier           (3 x 3 = 9)
 *   ablation persona source x caption source             (2 x 2 = 4)
 */

#ifndef SVSIM_EXP_GRID_HPP
#define SVSIM_EXP_GRID_HPP

#include <string>
#include <vector>

#include "svsim/sim/orchestrator.hpp"

namespace svsim::exp {

enum class GridKind : uint8_t { set1, set2, ablation };
std::string_view to_string(GridKind kind);

struct Condition {
    std::string key;       // e.g. "S1_A0.5_full"
    nlohmann::json factors; // named factor levels
};

struct ExperimentGrid {
    GridKind kind = GridKind::set1;
    std::vector<Condition> conditions;
    std::vector<uint64_t> seeds = {0, 1, 2};
    int64_t horizon = 200;

    static ExperimentGrid set1();     // horizon 350
    static ExperimentGrid set2();     // horizon 200
    static ExperimentGrid ablation(); // horizon 200
};

struct GridOptions {
    std::string out_dir;
    sim::SimulationConfig base;      // factor overrides apply on top
    std::size_t parallelism = 2;
    int64_t horizon_override = 0;    // 0: use the grid's horizon
    bool stress = false;             // tight budget + aggressive control interval
    bool extended_horizon = false;   // doubles horizons for stability checks
    bool persist_runs = true;
};

struct RunRecord {
    std::string condition_key;
    uint64_t seed = 0;
    bool failed = false;
    std::string error;
    sim::RunSummary summary;
    std::string run_dir;
};

struct ConditionReport {
    std::string key;
    nlohmann::json factors;
    std::vector<RunRecord> runs; // one per seed
    nlohmann::json stats;        // metric -> {mean, std} over succeeded seeds
};

/// Condition factors applied to a copy of the base config.
sim::SimulationConfig condition_config(const ExperimentGrid& grid, const Condition& condition,
                                       uint64_t seed, const GridOptions& options);

/// Executes the whole grid; failed runs mark their condition but the grid
/// continues. Reports are ordered as the grid enumerates conditions.
std::vector<ConditionReport> run_grid(const ExperimentGrid& grid, const GridOptions& options);

/// mean/std (n-1 denominator) per summary metric over the seed runs.
nlohmann::json aggregate_stats(const std::vector<RunRecord>& runs);

} // namespace svsim::exp

#endif // SVSIM_EXP_GRID_HPP
