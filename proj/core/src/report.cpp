#include "srx/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace srx {

namespace {

const char* direction_mark(Direction d) {
    return d == Direction::lower_better ? "↓" : "↑";
}

const char* direction_name(Direction d) {
    return d == Direction::lower_better ? "lower" : "higher";
}

Direction direction_from_name(const std::string& s) {
    return s == "lower" ? Direction::lower_better : Direction::higher_better;
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

std::pair<double, double> summarize(const MetricSeries& series) {
    if (series.values.empty())
        throw EmptySeries("summarize: no values for " + series.metric);
    const double n = static_cast<double>(series.values.size());
    double mean = 0.0;
    for (double v : series.values)
        mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : series.values)
        var += (v - mean) * (v - mean);
    return {mean, std::sqrt(var / n)}; // population std
}

std::string render_mean_std(double mean, double stddev) {
    return fixed2(mean) + " ± " + fixed2(stddev);
}

std::pair<double, double> natural_range(const std::string& metric) {
    if (metric == "SSIM" || metric == "NCC")
        return {-1.0, 1.0};
    return {0.0, 1.0};
}

Histogram histogram(const MetricSeries& series, int bins) {
    if (series.values.empty())
        throw EmptySeries("histogram: no values for " + series.metric);
    if (bins < 1)
        throw EmptySeries("histogram: bins must be >= 1");
    const auto [lo, hi] = natural_range(series.metric);
    const double width = (hi - lo) / bins;

    Histogram h;
    h.edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i)
        h.edges[i] = lo + width * i;
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    for (double v : series.values) {
        int idx = static_cast<int>(std::floor((v - lo) / width));
        idx = std::clamp(idx, 0, bins - 1); // last bin right-closed
        ++h.counts[idx];
    }
    return h;
}

PhaseReport build_phase_report(const std::vector<MetricSeries>& series, double fid, int bins) {
    PhaseReport report;
    report.fid = fid;
    for (const auto& s : series) {
        MetricSummary summary;
        std::tie(summary.mean, summary.stddev) = summarize(s);
        summary.direction = s.direction;
        summary.skipped = s.skipped;
        summary.hist = histogram(s, bins);
        report.sample_count = std::max(report.sample_count, s.values.size() + s.skipped);
        report.metrics.emplace_back(s.metric, std::move(summary));
    }
    return report;
}

nlohmann::ordered_json phase_report_to_json(const PhaseReport& report) {
    nlohmann::ordered_json j;
    j["sample_count"] = report.sample_count;
    j["fid"] = report.fid;
    nlohmann::ordered_json metrics;
    for (const auto& [name, m] : report.metrics) {
        metrics[name] = {{"mean", m.mean},
                         {"std", m.stddev},
                         {"direction", direction_name(m.direction)},
                         {"skipped", m.skipped},
                         {"histogram",
                          {{"edges", m.hist.edges}, {"counts", m.hist.counts}}}};
    }
    j["metrics"] = std::move(metrics);
    return j;
}

PhaseReport phase_report_from_json(const nlohmann::ordered_json& j) {
    PhaseReport report;
    report.sample_count = j.at("sample_count").get<std::size_t>();
    report.fid = j.at("fid").get<double>();
    for (const auto& [name, mj] : j.at("metrics").items()) {
        MetricSummary m;
        m.mean = mj.at("mean").get<double>();
        m.stddev = mj.at("std").get<double>();
        m.direction = direction_from_name(mj.at("direction").get<std::string>());
        m.skipped = mj.at("skipped").get<std::size_t>();
        m.hist.edges = mj.at("histogram").at("edges").get<std::vector<double>>();
        m.hist.counts = mj.at("histogram").at("counts").get<std::vector<std::size_t>>();
        report.metrics.emplace_back(name, std::move(m));
    }
    return report;
}

std::string render_report_markdown(
    const std::map<std::string, std::map<std::string, PhaseReport>>& by_model_phase) {
    std::ostringstream out;
    for (const auto& [model, phases] : by_model_phase) {
        // fixed column order: Pre, Intermediate, Post
        std::vector<std::string> order;
        for (const char* p : {"Pre", "Intermediate", "Post"})
            if (phases.count(p))
                order.push_back(p);

        out << "## " << model << "\n\n|";
        for (const auto& p : order)
            out << " | " << model << "-" << p;
        out << " |\n|---";
        for (std::size_t i = 0; i < order.size(); ++i)
            out << "|---";
        out << "|\n";

        const PhaseReport& first = phases.at(order.front());
        for (std::size_t mi = 0; mi < first.metrics.size(); ++mi) {
            const auto& name = first.metrics[mi].first;
            out << "| " << name << " (" << direction_mark(first.metrics[mi].second.direction)
                << ")";
            for (const auto& p : order) {
                const auto& m = phases.at(p).metrics[mi].second;
                out << " | " << render_mean_std(m.mean, m.stddev);
            }
            out << " |\n";
        }
        out << "| FID (↓)";
        for (const auto& p : order)
            out << " | " << fixed2(phases.at(p).fid);
        out << " |\n\n";
    }
    return out.str();
}

std::string histogram_csv(const Histogram& hist) {
    std::ostringstream out;
    out << "bin_left,bin_right,count\n";
    out.precision(17);
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        out << hist.edges[i] << ',' << hist.edges[i + 1] << ',' << hist.counts[i] << '\n';
    return out.str();
}

std::vector<ComparisonRow> compare(const PhaseReport& m1_post, const PhaseReport& m2_post) {
    if (m1_post.metrics.size() != m2_post.metrics.size())
        throw MissingReport("compare: reports carry different metric sets");

    auto decide = [](double m1, double m2, Direction d) -> std::string {
        const std::string r1 = fixed2(m1), r2 = fixed2(m2);
        if (r1 == r2)
            return "tie";
        const bool m1_wins = (d == Direction::lower_better) ? m1 < m2 : m1 > m2;
        return m1_wins ? "M1" : "M2";
    };

    std::vector<ComparisonRow> rows;
    for (std::size_t i = 0; i < m1_post.metrics.size(); ++i) {
        const auto& [name, s1] = m1_post.metrics[i];
        const auto& s2 = m2_post.metrics[i].second;
        rows.push_back({name, s1.direction, s1.mean, s2.mean,
                        decide(s1.mean, s2.mean, s1.direction)});
    }
    rows.push_back({"FID", Direction::lower_better, m1_post.fid, m2_post.fid,
                    decide(m1_post.fid, m2_post.fid, Direction::lower_better)});
    return rows;
}

std::string render_comparison_markdown(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    out << "| | M2 | M1 | better |\n|---|---|---|---|\n";
    for (const auto& r : rows)
        out << "| " << r.metric << " (" << direction_mark(r.direction) << ") | " << fixed2(r.m2)
            << " | " << fixed2(r.m1) << " | " << r.winner << " |\n";
    return out.str();
}

} // namespace srx
