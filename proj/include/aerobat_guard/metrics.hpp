// Post-run error analysis: per-axis RMS, total RMS, stability metric and the
// combined performance score.
#pragma once

#include <cmath>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace aguard::metrics {

/// sqrt(mean((x_i - target)^2)).
inline double rms_axis(std::span<const double> series, double target) {
    if (series.empty()) throw std::domain_error("rms_axis: empty series");
    double acc = 0.0;
    for (double v : series) acc += (v - target) * (v - target);
    return std::sqrt(acc / static_cast<double>(series.size()));
}

/// Population standard deviation (divides by n).
inline double population_std(std::span<const double> series) {
    if (series.empty()) throw std::domain_error("population_std: empty series");
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
    return rms_axis(series, mean);
}

inline double rms_total(double rx, double ry, double rz) {
    if (rx < 0.0 || ry < 0.0 || rz < 0.0) throw std::domain_error("rms_total: negative component");
    return std::sqrt(rx * rx + ry * ry + rz * rz);
}

/// -(sx + sy + sz) / 3; never positive.
inline double stability_metric(double sx, double sy, double sz) {
    if (sx < 0.0 || sy < 0.0 || sz < 0.0) throw std::domain_error("stability_metric: negative deviation");
    return 0.0 - (sx + sy + sz) / 3.0;  // +0 rather than -0 for a still series
}

inline double performance_score(double rms_tot, double stability) { return stability - rms_tot; }

struct MetricsReport {
    std::string label;
    double rms_x = 0, rms_y = 0, rms_z = 0, rms_total = 0;
    double sigma_x = 0, sigma_y = 0, sigma_z = 0;
    double stability = 0;
    double score = 0;
    std::size_t samples = 0;
};

struct Targets {
    double x = 0.0;
    double y = 0.0;
    double z = 0.2;
};

/// Metrics of three position series. `scale` multiplies positions and
/// targets before analysis (e.g. 100 to report in centimetres).
inline MetricsReport analyze_series(std::span<const double> xs, std::span<const double> ys,
                                    std::span<const double> zs, const Targets& tgt, double scale = 1.0,
                                    std::string label = {}) {
    if (xs.size() != ys.size() || xs.size() != zs.size()) throw std::domain_error("analyze: series length mismatch");
    auto scaled = [scale](std::span<const double> s) {
        std::vector<double> out(s.begin(), s.end());
        for (double& v : out) v *= scale;
        return out;
    };
    const auto x = scaled(xs), y = scaled(ys), z = scaled(zs);
    MetricsReport r;
    r.label = std::move(label);
    r.samples = x.size();
    r.rms_x = rms_axis(x, tgt.x * scale);
    r.rms_y = rms_axis(y, tgt.y * scale);
    r.rms_z = rms_axis(z, tgt.z * scale);
    r.rms_total = rms_total(r.rms_x, r.rms_y, r.rms_z);
    r.sigma_x = population_std(x);
    r.sigma_y = population_std(y);
    r.sigma_z = population_std(z);
    r.stability = stability_metric(r.sigma_x, r.sigma_y, r.sigma_z);
    r.score = performance_score(r.rms_total, r.stability);
    return r;
}

inline void write_report_csv(std::ostream& os, std::span<const MetricsReport> rows) {
    os << "label,rms_x,rms_y,rms_z,rms_total,sigma_x,sigma_y,sigma_z,stability,score,samples\n";
    for (const auto& r : rows) {
        os << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.label, r.rms_x, r.rms_y, r.rms_z, r.rms_total,
                          r.sigma_x, r.sigma_y, r.sigma_z, r.stability, r.score, r.samples);
    }
}

/// Aligned text table in the layout of the error-analysis summary.
inline void write_report_table(std::ostream& os, std::span<const MetricsReport> rows) {
    os << fmt::format("{:<10} {:>9} {:>9} {:>9} {:>9} {:>10} {:>9}\n", "Test", "X RMS", "Y RMS", "Z RMS", "Total",
                      "Stability", "Score");
    for (const auto& r : rows) {
        os << fmt::format("{:<10} {:>9.3f} {:>9.3f} {:>9.3f} {:>9.3f} {:>10.3f} {:>9.3f}\n", r.label, r.rms_x, r.rms_y,
                          r.rms_z, r.rms_total, r.stability, r.score);
    }
}

}  // namespace aguard::metrics
