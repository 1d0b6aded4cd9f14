#include "svsim/exp/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "svsim/sim/reducer.hpp"

namespace svsim::exp {

namespace {

std::string num(double v) {
    return nlohmann::json(v).dump(); // shortest round-trip representation
}

// Minimal SVG canvas: enough for bars, polylines, and labels.
class Svg {
public:
    Svg(int width, int height) : width_(width), height_(height) {
        body_ << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
              << height << "' viewBox='0 0 " << width << ' ' << height << "'>\n"
              << "<rect width='" << width << "' height='" << height << "' fill='white'/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& fill,
              double opacity = 1.0) {
        body_ << "<rect x='" << x << "' y='" << y << "' width='" << w << "' height='" << h
              << "' fill='" << fill << "' fill-opacity='" << opacity << "'/>\n";
    }
    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width = 1.0, const std::string& dash = "") {
        body_ << "<line x1='" << x1 << "' y1='" << y1 << "' x2='" << x2 << "' y2='" << y2
              << "' stroke='" << stroke << "' stroke-width='" << width << "'";
        if (!dash.empty()) body_ << " stroke-dasharray='" << dash << "'";
        body_ << "/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke,
                  double width = 1.5, const std::string& dash = "") {
        body_ << "<polyline fill='none' stroke='" << stroke << "' stroke-width='" << width << "'";
        if (!dash.empty()) body_ << " stroke-dasharray='" << dash << "'";
        body_ << " points='";
        for (const auto& [x, y] : points) body_ << x << ',' << y << ' ';
        body_ << "'/>\n";
    }
    void text(double x, double y, const std::string& label, int size = 11,
              const std::string& fill = "#333") {
        body_ << "<text x='" << x << "' y='" << y << "' font-size='" << size
              << "' font-family='sans-serif' fill='" << fill << "'>" << label << "</text>\n";
    }
    void save(const std::string& path) {
        std::ofstream out(path);
        out << body_.str() << "</svg>\n";
    }

private:
    int width_, height_;
    std::ostringstream body_;
};

std::vector<bus::TypedEvent> load_events(const std::string& run_dir) {
    std::ifstream in(run_dir + "/events.jsonl");
    if (!in) return {};
    return bus::EventBus::read_log(in);
}

} // namespace

std::string conditions_csv(const std::vector<ConditionReport>& reports) {
    std::ostringstream out;
    out << "condition,factors,runs,mean_watch_time,mean_watch_time_std,skip_rate,skip_rate_std,"
           "view_gini,view_gini_std,gift_revenue,gift_revenue_std,gift_gini,gift_gini_std,"
           "hashtag_entropy_bits,hashtag_entropy_bits_std,llm_spend,llm_spend_std\n";
    for (const ConditionReport& report : reports) {
        out << report.key << ",\"" << report.factors.dump() << "\"," << report.runs.size();
        for (const char* metric : {"mean_watch_time", "skip_rate", "view_gini", "gift_revenue",
                                   "gift_gini", "hashtag_entropy_bits", "llm_spend"}) {
            if (report.stats.contains(metric)) {
                out << ',' << num(report.stats[metric]["mean"].get<double>()) << ','
                    << num(report.stats[metric]["std"].get<double>());
            } else {
                out << ",,";
            }
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::json report_json(GridKind kind, const std::vector<ConditionReport>& reports) {
    nlohmann::json out;
    out["grid"] = std::string(to_string(kind));
    nlohmann::json conditions = nlohmann::json::array();
    for (const ConditionReport& report : reports) {
        nlohmann::json runs = nlohmann::json::array();
        for (const RunRecord& run : report.runs) {
            nlohmann::json r;
            r["seed"] = run.seed;
            r["failed"] = run.failed;
            if (run.failed) {
                r["error"] = run.error;
            } else {
                r["summary"] = run.summary.to_json();
                r["run_dir"] = run.run_dir;
            }
            runs.push_back(std::move(r));
        }
        conditions.push_back({{"key", report.key},
                              {"factors", report.factors},
                              {"stats", report.stats},
                              {"runs", runs}});
    }
    out["conditions"] = conditions;
    return out;
}

void write_grid_report(GridKind kind, const std::vector<ConditionReport>& reports,
                       const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::string dir = out_dir + "/" + std::string(to_string(kind));
    fs::create_directories(dir);
    std::ofstream(dir + "/conditions.csv") << conditions_csv(reports);
    std::ofstream(dir + "/report.json") << report_json(kind, reports).dump(2) << '\n';

    if (kind == GridKind::set1) {
        write_earnings_figure(reports, dir + "/fig_earnings.svg");
        write_adoption_figure(reports, dir + "/fig_adoption.svg");
    }
    if (kind == GridKind::set2) {
        // Lifecycle figure from the first S2 run that persisted a log, or
        // any run otherwise.
        std::string pick;
        for (const ConditionReport& report : reports) {
            for (const RunRecord& run : report.runs) {
                if (run.failed || run.run_dir.empty()) continue;
                if (pick.empty()) pick = run.run_dir;
                if (report.factors.value("S", "") == "S2") {
                    pick = run.run_dir;
                    break;
                }
            }
        }
        if (!pick.empty()) write_trend_figure(pick, dir + "/fig_trend_lifecycle.svg");
    }
}

std::map<int64_t, double> creator_earnings(const std::string& run_dir) {
    std::map<int64_t, double> earnings;
    for (const bus::TypedEvent& e : load_events(run_dir)) {
        if (e.type == bus::EventType::CONTENT_CREATED) {
            earnings.emplace(e.payload.at("creator_id").get<int64_t>(), 0.0);
        } else if (e.type == bus::EventType::GIFT_SENT) {
            earnings[e.payload.at("creator_id").get<int64_t>()] +=
                e.payload.at("amount").get<double>();
        }
    }
    return earnings;
}

void write_earnings_figure(const std::vector<ConditionReport>& reports,
                           const std::string& svg_path) {
    // Pool per-creator earnings across runs, grouped by the S factor.
    std::map<std::string, std::vector<double>> by_strategy;
    for (const ConditionReport& report : reports) {
        std::string strategy = report.factors.value("S", "S?");
        for (const RunRecord& run : report.runs) {
            if (run.failed || run.run_dir.empty()) continue;
            for (const auto& [creator, amount] : creator_earnings(run.run_dir)) {
                by_strategy[strategy].push_back(amount);
            }
        }
    }
    if (by_strategy.empty()) return;

    double max_value = 1.0;
    for (const auto& [s, values] : by_strategy) {
        for (double v : values) max_value = std::max(max_value, v);
    }
    const int bins = 24;
    const double W = 640, H = 360, L = 60, B = 40;
    Svg svg(static_cast<int>(W), static_cast<int>(H));
    svg.text(L, 20, "Creator earnings distribution (share of creators per revenue bin)");

    std::map<std::string, std::string> colors = {{"S0", "#9e9e9e"}, {"S1", "#2e7d32"},
                                                 {"S2", "#1565c0"}};
    double plot_w = W - L - 20, plot_h = H - B - 40;
    double peak_share = 0.0;
    std::map<std::string, std::vector<double>> shares;
    for (const auto& [strategy, values] : by_strategy) {
        std::vector<double> histogram(bins, 0.0);
        for (double v : values) {
            // log-scaled bins emphasize the heavy tail
            double unit = std::log1p(v) / std::log1p(max_value);
            int bin = std::min(bins - 1, static_cast<int>(unit * bins));
            histogram[bin] += 1.0;
        }
        for (double& h : histogram) h /= static_cast<double>(values.size());
        for (double h : histogram) peak_share = std::max(peak_share, h);
        shares[strategy] = std::move(histogram);
    }
    int series = 0;
    for (const auto& [strategy, histogram] : shares) {
        std::string color = colors.count(strategy) ? colors[strategy] : "#555";
        double bar_w = plot_w / bins / static_cast<double>(shares.size());
        for (int b = 0; b < bins; ++b) {
            double h = histogram[b] / peak_share * plot_h;
            svg.rect(L + b * plot_w / bins + series * bar_w, H - B - h, bar_w * 0.9, h, color,
                     0.75);
        }
        svg.text(L + 100.0 * series, H - 8, strategy + " (n=" +
                                                std::to_string(by_strategy[strategy].size()) + ")",
                 11, color);
        ++series;
    }
    svg.text(L, H - B + 16, "log-scaled revenue bins ->");
    svg.save(svg_path);
}

void write_adoption_figure(const std::vector<ConditionReport>& reports,
                           const std::string& svg_path) {
    // S1 branch: adoption level vs gift inequality and total gift revenue.
    std::map<double, std::vector<double>> gini_by_adoption, revenue_by_adoption;
    for (const ConditionReport& report : reports) {
        if (report.factors.value("S", "") != "S1") continue;
        double adoption = report.factors.value("A", 0.0);
        for (const RunRecord& run : report.runs) {
            if (run.failed) continue;
            gini_by_adoption[adoption].push_back(run.summary.gift_gini);
            revenue_by_adoption[adoption].push_back(run.summary.gift_revenue);
        }
    }
    if (gini_by_adoption.empty()) return;

    const double W = 640, H = 360, L = 70, R = 70, B = 50;
    double plot_w = W - L - R, plot_h = H - B - 50;
    Svg svg(static_cast<int>(W), static_cast<int>(H));
    svg.text(L, 20, "Ecosystem effects of planner adoption");

    double rev_max = 1.0;
    for (const auto& [a, values] : revenue_by_adoption) {
        for (double v : values) rev_max = std::max(rev_max, v);
    }
    auto x_of = [&](double adoption) { return L + adoption * plot_w; };
    std::vector<std::pair<double, double>> gini_points, revenue_points;
    for (const auto& [adoption, values] : gini_by_adoption) {
        double m = 0.0;
        for (double v : values) m += v;
        m /= static_cast<double>(values.size());
        gini_points.push_back({x_of(adoption), H - B - m * plot_h});
    }
    for (const auto& [adoption, values] : revenue_by_adoption) {
        double m = 0.0;
        for (double v : values) m += v;
        m /= static_cast<double>(values.size());
        revenue_points.push_back({x_of(adoption), H - B - m / rev_max * plot_h});
    }
    svg.line(L, H - B, W - R, H - B, "#888");
    svg.polyline(gini_points, "#c62828", 2.0);
    svg.polyline(revenue_points, "#1565c0", 2.0, "6,4");
    svg.text(L, 40, "gift Gini (solid, left axis 0-1)", 11, "#c62828");
    svg.text(L, 56, "gift revenue (dashed, right axis 0-" + num(rev_max) + ")", 11, "#1565c0");
    for (double adoption : {0.0, 0.2, 0.5, 1.0}) {
        svg.text(x_of(adoption) - 8, H - B + 16, num(adoption));
    }
    svg.text(L + plot_w / 2 - 40, H - 12, "adoption rate A");
    svg.save(svg_path);
}

void write_trend_figure(const std::string& run_dir, const std::string& svg_path) {
    std::vector<bus::TypedEvent> events = load_events(run_dir);
    if (events.empty()) return;

    // Focus tag: most forecasted, else the most active.
    std::map<std::string, int> forecast_counts;
    std::map<std::string, std::map<int64_t, double>> forecast_series;
    for (const bus::TypedEvent& e : events) {
        if (e.type == bus::EventType::TREND_FORECASTED) {
            std::string tag = e.payload.at("hashtag").get<std::string>();
            forecast_counts[tag] += 1;
            forecast_series[tag][e.step] = e.payload.at("confidence").get<double>();
        }
    }
    std::string focus;
    int best = 0;
    for (const auto& [tag, count] : forecast_counts) {
        if (count > best) {
            best = count;
            focus = tag;
        }
    }
    if (focus.empty()) {
        std::map<std::string, double> usage;
        std::map<int64_t, std::vector<std::string>> tags_of;
        for (const bus::TypedEvent& e : events) {
            if (e.type == bus::EventType::CONTENT_CREATED) {
                std::string joined = e.payload.at("hashtags").get<std::string>();
                std::stringstream ss(joined);
                std::string tag;
                while (std::getline(ss, tag, ',')) {
                    tags_of[e.payload.at("content_id").get<int64_t>()].push_back(tag);
                }
            } else if (e.type == bus::EventType::VIDEO_WATCHED ||
                       e.type == bus::EventType::VIDEO_ENGAGED) {
                for (const std::string& tag : tags_of[e.payload.at("content_id").get<int64_t>()]) {
                    usage[tag] += 1.0;
                }
            }
        }
        double top = 0.0;
        for (const auto& [tag, count] : usage) {
            if (count > top) {
                top = count;
                focus = tag;
            }
        }
    }
    if (focus.empty()) return;

    std::map<int64_t, double> volume = sim::hashtag_interaction_series(events, focus);
    int64_t max_step = 0;
    double max_volume = 1.0;
    for (const auto& [step, v] : volume) {
        max_step = std::max(max_step, step);
        max_volume = std::max(max_volume, v);
    }
    for (const bus::TypedEvent& e : events) max_step = std::max(max_step, e.step);
    if (max_step == 0) return;

    const double W = 720, H = 360, L = 60, B = 40;
    double plot_w = W - L - 30, plot_h = H - B - 50;
    Svg svg(static_cast<int>(W), static_cast<int>(H));
    svg.text(L, 20, "Trend lifecycle: #" + focus);
    auto x_of = [&](int64_t step) {
        return L + static_cast<double>(step) / static_cast<double>(max_step) * plot_w;
    };

    // Interaction volume bars.
    for (const auto& [step, v] : volume) {
        double h = v / max_volume * plot_h;
        svg.rect(x_of(step), H - B - h, std::max(1.0, plot_w / max_step * 0.8), h, "#bdbdbd",
                 0.8);
    }
    // Smoothed trend score line over the volume series.
    std::vector<std::pair<double, double>> score_points;
    double score = 0.0, score_max = 1e-9;
    std::vector<double> scores(static_cast<std::size_t>(max_step) + 1, 0.0);
    for (int64_t s = 0; s <= max_step; ++s) {
        auto it = volume.find(s);
        double v = it == volume.end() ? 0.0 : it->second;
        score = 0.3 * v + 0.7 * score;
        scores[static_cast<std::size_t>(s)] = score;
        score_max = std::max(score_max, score);
    }
    for (int64_t s = 0; s <= max_step; ++s) {
        score_points.push_back(
            {x_of(s), H - B - scores[static_cast<std::size_t>(s)] / score_max * plot_h});
    }
    svg.polyline(score_points, "#6a1b9a", 2.0);

    // Forecast overlay (dashed): confidence marks when the predictor fired.
    auto fs = forecast_series.find(focus);
    if (fs != forecast_series.end()) {
        std::vector<std::pair<double, double>> forecast_points;
        for (const auto& [step, confidence] : fs->second) {
            forecast_points.push_back({x_of(step), H - B - confidence * plot_h});
        }
        if (forecast_points.size() == 1) {
            forecast_points.push_back(
                {forecast_points[0].first + 6, forecast_points[0].second});
        }
        svg.polyline(forecast_points, "#2e7d32", 2.0, "6,4");
        svg.text(L, 56, "forecast confidence (dashed)", 11, "#2e7d32");
    }
    svg.text(L, 40, "interaction volume (bars), trend score (line)", 11, "#555");
    svg.text(L + plot_w / 2 - 30, H - 10, "simulation step");
    svg.save(svg_path);
}

} // namespace svsim::exp
