// svsim command-line harness: single runs, the three experiment grids,
// report regeneration, and log replay verification.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "svsim/bus/schema.hpp"
#include "svsim/exp/grid.hpp"
#include "svsim/exp/report.hpp"
#include "svsim/sim/orchestrator.hpp"
#include "svsim/sim/reducer.hpp"

using namespace svsim;

namespace {

struct CommonFlags {
    std::string out_dir = "runs";
    std::string config_file;
    std::string llm_mode = "disabled";
    std::vector<uint64_t> seeds = {0, 1, 2};
    int64_t horizon = 0; // 0 = grid/config default
    std::size_t population = 0;
    double budget_cap = -1.0;
    std::size_t parallel = 2;
    bool stress = false;
    bool extended = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--config", flags.config_file, "JSON config file with overrides");
    cmd->add_option("--llm-mode", flags.llm_mode, "disabled|fixture|live");
    cmd->add_option("--seeds", flags.seeds, "seed list");
    cmd->add_option("--horizon", flags.horizon, "steps per run (0 = default)");
    cmd->add_option("--population", flags.population, "agent count (0 = default)");
    cmd->add_option("--budget-cap", flags.budget_cap, "decision-service budget cap in USD");
    cmd->add_option("--parallel", flags.parallel, "worker pool size");
    cmd->add_flag("--stress", flags.stress, "tight budget + aggressive control interval");
    cmd->add_flag("--extended-horizon", flags.extended, "double horizons for stability checks");
}

sim::SimulationConfig base_config(const CommonFlags& flags) {
    sim::SimulationConfig config;
    if (!flags.config_file.empty()) {
        std::ifstream in(flags.config_file);
        if (!in) {
            throw ConfigError("cannot open config file: " + flags.config_file);
        }
        config.apply_overrides(nlohmann::json::parse(in));
    }
    config.llm_mode = sim::llm_mode_from_string(flags.llm_mode);
    if (flags.population > 0) config.population = flags.population;
    if (flags.budget_cap >= 0.0) config.decisions.budget_cap = flags.budget_cap;
    return config;
}

int run_grid_command(exp::GridKind kind, const CommonFlags& flags) {
    exp::ExperimentGrid grid;
    switch (kind) {
        case exp::GridKind::set1: grid = exp::ExperimentGrid::set1(); break;
        case exp::GridKind::set2: grid = exp::ExperimentGrid::set2(); break;
        case exp::GridKind::ablation: grid = exp::ExperimentGrid::ablation(); break;
    }
    grid.seeds = flags.seeds;

    exp::GridOptions options;
    options.out_dir = flags.out_dir;
    options.base = base_config(flags);
    options.parallelism = flags.parallel;
    options.horizon_override = flags.horizon;
    options.stress = flags.stress;
    options.extended_horizon = flags.extended;

    auto reports = exp::run_grid(grid, options);
    exp::write_grid_report(kind, reports, flags.out_dir);

    std::size_t failed = 0, total = 0;
    for (const auto& report : reports) {
        for (const auto& run : report.runs) {
            ++total;
            if (run.failed) {
                ++failed;
                std::cerr << "FAILED " << report.key << " seed " << run.seed << ": " << run.error
                          << '\n';
            }
        }
    }
    std::cout << std::string(exp::to_string(kind)) << ": " << reports.size() << " conditions, "
              << total << " runs, " << failed << " failed\n"
              << "report: " << flags.out_dir << "/" << std::string(exp::to_string(kind))
              << "/report.json\n";
    return failed == 0 ? 0 : 1;
}

int replay_command(const std::string& run_dir) {
    std::ifstream config_in(run_dir + "/config.json");
    std::ifstream events_in(run_dir + "/events.jsonl");
    std::ifstream summary_in(run_dir + "/summary.json");
    if (!config_in || !events_in || !summary_in) {
        std::cerr << "replay: missing config.json / events.jsonl / summary.json in " << run_dir
                  << '\n';
        return 2;
    }
    sim::SimulationConfig config =
        sim::SimulationConfig::from_json(nlohmann::json::parse(config_in));
    std::vector<bus::TypedEvent> log = bus::EventBus::read_log(events_in);
    nlohmann::json summary = nlohmann::json::parse(summary_in);

    uint64_t replayed = sim::Orchestrator::replay_state_hash(config, log);
    uint64_t recorded = summary.at("state_hash").get<uint64_t>();
    sim::RunSummary reduced = sim::reduce_summary(log, summary.value("llm_spend", 0.0));

    bool hash_ok = replayed == recorded;
    bool metrics_ok =
        std::abs(reduced.mean_watch_time - summary.at("mean_watch_time").get<double>()) < 1e-9 &&
        std::abs(reduced.view_gini - summary.at("view_gini").get<double>()) < 1e-9 &&
        reduced.impressions == summary.at("impressions").get<int64_t>();
    std::cout << "events: " << log.size() << '\n'
              << "state hash: " << (hash_ok ? "MATCH" : "MISMATCH") << " (" << replayed << ")\n"
              << "summary recompute: " << (metrics_ok ? "MATCH" : "MISMATCH") << '\n';
    return hash_ok && metrics_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"short-video platform digital twin simulator"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* run = app.add_subcommand("run", "single simulation run");
    add_common(run, flags);
    uint64_t run_seed = 0;
    std::string governance = "S0";
    double adoption = 0.0;
    bool full_commerce = false;
    bool trace_feeds = false;
    run->add_option("--seed", run_seed, "run seed");
    run->add_option("--governance", governance, "S0|S1|S2");
    run->add_option("--adoption", adoption, "planner adoption fraction");
    run->add_flag("--full-commerce", full_commerce, "enable the commerce channel");
    run->add_flag("--trace-feeds", trace_feeds, "persist per-serve diagnostic traces");

    auto* set1 = app.add_subcommand("run-set1", "campaign-planning grid (16 conditions x seeds)");
    add_common(set1, flags);
    auto* set2 = app.add_subcommand("run-set2", "trend-control grid (9 conditions x seeds)");
    add_common(set2, flags);
    auto* ablation = app.add_subcommand("run-ablation", "persona x caption grid (4 conditions)");
    add_common(ablation, flags);

    auto* report = app.add_subcommand("report", "regenerate reports from persisted run dirs");
    std::string report_dir;
    std::string report_kind = "set1";
    report->add_option("--grid-dir", report_dir, "grid output dir (contains <kind>/grid.json)")
        ->required();
    report->add_option("--kind", report_kind, "set1|set2|ablation");

    auto* replay = app.add_subcommand("replay", "verify a run directory by replaying its log");
    std::string replay_dir;
    replay->add_option("--run-dir", replay_dir, "run directory")->required();

    auto* schemas = app.add_subcommand("dump-schemas", "print the event payload schema registry");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            sim::SimulationConfig config = base_config(flags);
            config.seed = run_seed;
            if (flags.horizon > 0) config.horizon = flags.horizon;
            config.governance_strategy = platform::strategy_from_string(governance);
            config.planner_adoption = adoption;
            config.full_commerce = full_commerce;
            config.trace_feeds = trace_feeds;
            config.run_dir = flags.out_dir + "/single/seed" + std::to_string(run_seed);
            std::filesystem::create_directories(config.run_dir);
            sim::Orchestrator orchestrator(config);
            sim::RunResult result = orchestrator.run();
            std::cout << result.summary.to_json().dump(2) << '\n'
                      << "run dir: " << result.run_dir << '\n';
            return 0;
        }
        if (set1->parsed()) return run_grid_command(exp::GridKind::set1, flags);
        if (set2->parsed()) return run_grid_command(exp::GridKind::set2, flags);
        if (ablation->parsed()) return run_grid_command(exp::GridKind::ablation, flags);
        if (report->parsed()) {
            // Rebuild ConditionReports from persisted summaries.
            exp::GridKind kind = exp::GridKind::set1;
            if (report_kind == "set2") kind = exp::GridKind::set2;
            else if (report_kind == "ablation") kind = exp::GridKind::ablation;
            std::string grid_path = report_dir + "/" + report_kind + "/grid.json";
            std::ifstream grid_in(grid_path);
            if (!grid_in) {
                std::cerr << "report: missing " << grid_path << '\n';
                return 2;
            }
            nlohmann::json manifest = nlohmann::json::parse(grid_in);
            std::vector<exp::ConditionReport> reports;
            for (const auto& cj : manifest.at("conditions")) {
                exp::ConditionReport cr;
                cr.key = cj.at("key").get<std::string>();
                cr.factors = cj.at("factors");
                for (const auto& seed : manifest.at("seeds")) {
                    std::string run_dir = report_dir + "/" + report_kind + "/" + cr.key +
                                          "/seed" + std::to_string(seed.get<uint64_t>());
                    std::ifstream sum_in(run_dir + "/summary.json");
                    exp::RunRecord record;
                    record.condition_key = cr.key;
                    record.seed = seed.get<uint64_t>();
                    if (!sum_in) {
                        record.failed = true;
                        record.error = "missing summary.json";
                    } else {
                        nlohmann::json s = nlohmann::json::parse(sum_in);
                        record.summary.mean_watch_time = s.value("mean_watch_time", 0.0);
                        record.summary.skip_rate = s.value("skip_rate", 0.0);
                        record.summary.view_gini = s.value("view_gini", 0.0);
                        record.summary.gift_revenue = s.value("gift_revenue", 0.0);
                        record.summary.gift_gini = s.value("gift_gini", 0.0);
                        record.summary.hashtag_entropy_bits = s.value("hashtag_entropy_bits", 0.0);
                        record.summary.llm_spend = s.value("llm_spend", 0.0);
                        record.summary.commerce_revenue = s.value("commerce_revenue", 0.0);
                        record.summary.impressions = s.value("impressions", int64_t{0});
                        record.summary.mean_session_length = s.value("mean_session_length", 0.0);
                        record.run_dir = run_dir;
                    }
                    cr.runs.push_back(std::move(record));
                }
                cr.stats = exp::aggregate_stats(cr.runs);
                reports.push_back(std::move(cr));
            }
            exp::write_grid_report(kind, reports, report_dir);
            std::cout << "report regenerated under " << report_dir << "/" << report_kind << '\n';
            return 0;
        }
        if (replay->parsed()) return replay_command(replay_dir);
        if (schemas->parsed()) {
            std::cout << bus::SchemaRegistry::instance().export_json().dump(2) << '\n';
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 0;
}
