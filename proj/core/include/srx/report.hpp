#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "srx/errors.hpp"
#include "srx/metrics.hpp"

namespace srx {

/// Per-sample values of one metric over one phase, manifest order.
struct MetricSeries {
    std::string metric;
    Direction direction = Direction::lower_better;
    std::string phase;
    std::string model;
    std::vector<double> values;
    std::size_t skipped = 0; // degenerate-input samples, excluded not imputed
};

struct Histogram {
    std::vector<double> edges;       // bins + 1
    std::vector<std::size_t> counts; // bins
};

/// (mean, population std). Throws EmptySeries.
std::pair<double, double> summarize(const MetricSeries& series);

/// "0.23 ± 0.08" — two decimals, '.' separator regardless of locale.
std::string render_mean_std(double mean, double stddev);

/// Natural histogram range of a metric: [0,1] for RMSE/MAE, [-1,1] for
/// SSIM/NCC.
std::pair<double, double> natural_range(const std::string& metric);

/// Uniform bins over the metric's natural range; right-open bins, last bin
/// right-closed.
Histogram histogram(const MetricSeries& series, int bins = 50);

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0;
    Direction direction = Direction::lower_better;
    std::size_t skipped = 0;
    Histogram hist;
};

/// Aggregate of one evaluation phase. Deliberately carries no model/phase
/// labels so equal phase contents serialize to equal bytes.
struct PhaseReport {
    std::size_t sample_count = 0;
    double fid = 0.0;
    std::vector<std::pair<std::string, MetricSummary>> metrics; // fixed order
};

PhaseReport build_phase_report(const std::vector<MetricSeries>& series, double fid,
                               int bins = 50);

nlohmann::ordered_json phase_report_to_json(const PhaseReport& report);
PhaseReport phase_report_from_json(const nlohmann::ordered_json& j);

/// Markdown table for one (model, phase) collection, metric rows carrying
/// the ↓/↑ direction marks.
std::string render_report_markdown(
    const std::map<std::string, std::map<std::string, PhaseReport>>& by_model_phase);

/// CSV "bin_left,bin_right,count" lines for one histogram.
std::string histogram_csv(const Histogram& hist);

struct ComparisonRow {
    std::string metric;
    Direction direction = Direction::lower_better;
    double m1 = 0.0, m2 = 0.0;
    std::string winner; // "M1" | "M2" | "tie"
};

/// Side-by-side Post-phase comparison of the two topologies. Winner is
/// decided on the 2-decimal rendered values; equal rendering is a tie.
std::vector<ComparisonRow> compare(const PhaseReport& m1_post, const PhaseReport& m2_post);

std::string render_comparison_markdown(const std::vector<ComparisonRow>& rows);

} // namespace srx
