#include "svsim/exp/grid.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "svsim/metrics.hpp"

namespace svsim::exp {

std::string_view to_string(GridKind kind) {
    switch (kind) {
        case GridKind::set1: return "set1";
        case GridKind::set2: return "set2";
        case GridKind::ablation: return "ablation";
    }
    return "?";
}

namespace {

std::string trim_number(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

} // namespace

ExperimentGrid ExperimentGrid::set1() {
    ExperimentGrid grid;
    grid.kind = GridKind::set1;
    grid.horizon = 350;
    for (const char* strategy : {"S0", "S1"}) {
        for (double adoption : {0.0, 0.2, 0.5, 1.0}) {
            for (const char* stack : {"basic", "full"}) {
                Condition c;
                c.key = std::string(strategy) + "_A" + trim_number(adoption) + "_" + stack;
                c.factors = {{"S", strategy}, {"A", adoption}, {"M", stack}};
                grid.conditions.push_back(std::move(c));
            }
        }
    }
    return grid;
}

ExperimentGrid ExperimentGrid::set2() {
    ExperimentGrid grid;
    grid.kind = GridKind::set2;
    grid.horizon = 200;
    for (const char* strategy : {"S0", "S1", "S2"}) {
        for (double budget : {100.0, 50.0, 10.0}) {
            Condition c;
            c.key = std::string(strategy) + "_B" + trim_number(budget);
            c.factors = {{"S", strategy}, {"B", budget}};
            grid.conditions.push_back(std::move(c));
        }
    }
    return grid;
}

ExperimentGrid ExperimentGrid::ablation() {
    ExperimentGrid grid;
    grid.kind = GridKind::ablation;
    grid.horizon = 200;
    for (int persona : {0, 1}) {
        for (int caption : {0, 1}) {
            Condition c;
            c.key = "P" + std::to_string(persona) + "C" + std::to_string(caption);
            c.factors = {{"P", persona}, {"C", caption}};
            grid.conditions.push_back(std::move(c));
        }
    }
    return grid;
}

sim::SimulationConfig condition_config(const ExperimentGrid& grid, const Condition& condition,
                                       uint64_t seed, const GridOptions& options) {
    sim::SimulationConfig config = options.base;
    config.seed = seed;
    config.horizon = options.horizon_override > 0 ? options.horizon_override : grid.horizon;
    if (options.extended_horizon) {
        config.horizon *= 2;
    }

    const nlohmann::json& f = condition.factors;
    switch (grid.kind) {
        case GridKind::set1: {
            std::string strategy = f.at("S").get<std::string>();
            double adoption = f.at("A").get<double>();
            // S pins the planner implementation; A scales the cohort routed
            // to the request-driven planner, the rest stay on the template.
            config.planner_adoption = strategy == "S1" ? adoption : 0.0;
            config.full_commerce = f.at("M").get<std::string>() == "full";
            config.governance_strategy = platform::Strategy::S0;
            break;
        }
        case GridKind::set2: {
            config.governance_strategy =
                platform::strategy_from_string(f.at("S").get<std::string>());
            config.decisions.budget_cap = f.at("B").get<double>();
            break;
        }
        case GridKind::ablation: {
            config.persona_source = f.at("P").get<int>() == 1 ? user::PersonaSource::llm
                                                              : user::PersonaSource::template_bank;
            config.caption_source = f.at("C").get<int>() == 1
                                        ? content::CaptionSource::llm
                                        : content::CaptionSource::template_bank;
            break;
        }
    }
    if (options.stress) {
        // Stress preset deliberately overrides the budget factor to force
        // saturation and degradation.
        config.decisions.budget_cap = 1.0;
        config.control_interval = 1;
    }
    if (options.persist_runs && !options.out_dir.empty()) {
        config.run_dir = options.out_dir + "/" + std::string(to_string(grid.kind)) + "/" +
                         condition.key + "/seed" + std::to_string(seed);
    }
    return config;
}

nlohmann::json aggregate_stats(const std::vector<RunRecord>& runs) {
    const char* metrics[] = {"mean_watch_time", "skip_rate",          "view_gini",
                             "gift_revenue",    "gift_gini",          "hashtag_entropy_bits",
                             "llm_spend",       "commerce_revenue",   "impressions",
                             "mean_session_length"};
    nlohmann::json out = nlohmann::json::object();
    for (const char* metric : metrics) {
        MetricSample values;
        for (const RunRecord& run : runs) {
            if (run.failed) continue;
            values.push_back(run.summary.to_json().at(metric).get<double>());
        }
        if (values.empty()) continue;
        out[metric] = {{"mean", mean(values)}, {"std", sample_std(values)}};
    }
    return out;
}

std::vector<ConditionReport> run_grid(const ExperimentGrid& grid, const GridOptions& options) {
    struct Job {
        std::size_t condition_index;
        uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < grid.conditions.size(); ++c) {
        for (uint64_t seed : grid.seeds) {
            jobs.push_back({c, seed});
        }
    }

    std::vector<RunRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    std::size_t workers = std::max<std::size_t>(1, options.parallelism);
    workers = std::min(workers, jobs.size() == 0 ? 1 : jobs.size());

    auto work = [&]() {
        while (true) {
            std::size_t index = next.fetch_add(1);
            if (index >= jobs.size()) break;
            const Job& job = jobs[index];
            const Condition& condition = grid.conditions[job.condition_index];
            RunRecord record;
            record.condition_key = condition.key;
            record.seed = job.seed;
            try {
                sim::SimulationConfig config =
                    condition_config(grid, condition, job.seed, options);
                sim::Orchestrator orchestrator(config);
                sim::RunResult result = orchestrator.run();
                record.summary = result.summary;
                record.run_dir = result.run_dir;
            } catch (const std::exception& ex) {
                record.failed = true;
                record.error = ex.what();
            }
            records[index] = std::move(record);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();

    std::vector<ConditionReport> reports;
    for (std::size_t c = 0; c < grid.conditions.size(); ++c) {
        ConditionReport report;
        report.key = grid.conditions[c].key;
        report.factors = grid.conditions[c].factors;
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            if (jobs[j].condition_index == c) report.runs.push_back(records[j]);
        }
        report.stats = aggregate_stats(report.runs);
        reports.push_back(std::move(report));
    }

    if (!options.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(options.out_dir + "/" + std::string(to_string(grid.kind)));
        nlohmann::json manifest;
        manifest["kind"] = std::string(to_string(grid.kind));
        manifest["horizon"] = grid.horizon;
        manifest["seeds"] = grid.seeds;
        nlohmann::json conditions = nlohmann::json::array();
        for (const Condition& c : grid.conditions) {
            conditions.push_back({{"key", c.key}, {"factors", c.factors}});
        }
        manifest["conditions"] = conditions;
        std::ofstream(options.out_dir + "/" + std::string(to_string(grid.kind)) +
                      "/grid.json")
            << manifest.dump(2) << '\n';
    }
    return reports;
}

} // namespace svsim::exp
