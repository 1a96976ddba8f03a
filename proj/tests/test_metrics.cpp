#include <array>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "aerobat_guard/metrics.hpp"

using namespace aguard::metrics;

namespace {

struct TableRow {
    double x, y, z, total;
};

// Error-analysis summary of the five flight tests.
constexpr std::array<TableRow, 5> kSummary{{
    {3.670, 2.460, 0.085, 4.419},
    {4.509, 3.157, 0.093, 5.505},
    {4.374, 3.085, 0.075, 5.354},
    {4.406, 2.835, 0.090, 5.240},
    {3.783, 7.334, 0.076, 8.252},
}};

}  // namespace

TEST(RmsAxis, ConstantAtTarget) {
    const std::vector<double> s(50, 0.2);
    EXPECT_EQ(rms_axis(s, 0.2), 0.0);
}

TEST(RmsAxis, TwoSamples) {
    const std::vector<double> s{0.1, 0.3};
    EXPECT_NEAR(rms_axis(s, 0.2), 0.1, 1e-15);
}

TEST(RmsAxis, EmptyThrows) { EXPECT_THROW(rms_axis(std::vector<double>{}, 0.0), std::domain_error); }

TEST(RmsAxis, AgainstOwnMeanIsStd) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(1.0, 0.3);
    std::vector<double> s(1000);
    for (double& v : s) v = n(rng);
    EXPECT_GT(population_std(s), 0.0);
    EXPECT_EQ(population_std(std::vector<double>(10, 3.25)), 0.0);
}

TEST(RmsTotal, TestOneRow) { EXPECT_NEAR(rms_total(3.670, 2.460, 0.085), 4.419, 1e-3); }

TEST(RmsTotal, Zero) { EXPECT_EQ(rms_total(0, 0, 0), 0.0); }

TEST(RmsTotal, PythagoreanTriple) { EXPECT_EQ(rms_total(3, 4, 0), 5.0); }

TEST(RmsTotal, NegativeThrows) { EXPECT_THROW(rms_total(-1, 0, 0), std::domain_error); }

TEST(RmsTotal, SummaryTableConsistent) {
    for (const auto& r : kSummary) EXPECT_NEAR(rms_total(r.x, r.y, r.z), r.total, 1e-3);
}

TEST(StabilityMetric, Zero) {
    EXPECT_EQ(stability_metric(0, 0, 0), 0.0);
    EXPECT_FALSE(std::signbit(stability_metric(0, 0, 0)));
}

TEST(StabilityMetric, Mean) { EXPECT_NEAR(stability_metric(0.1, 0.2, 0.3), -0.2, 1e-15); }

TEST(StabilityMetric, NeverPositive) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 1000; ++i) EXPECT_LE(stability_metric(u(rng), u(rng), u(rng)), 0.0);
}

TEST(PerformanceScore, TestOne) { EXPECT_NEAR(performance_score(4.419, -0.090), -4.509, 1e-12); }

TEST(PerformanceScore, Zero) { EXPECT_EQ(performance_score(0, 0), 0.0); }

TEST(PerformanceScore, DecreasingInRms) {
    for (double r = 0.0; r < 10.0; r += 0.5) EXPECT_GT(performance_score(r, -0.1), performance_score(r + 0.1, -0.1));
}

TEST(PerformanceScore, PublishedScoresFromTotals) {
    // Back-solving stability = score + total gives -0.090 for both ends of the ranking.
    EXPECT_NEAR(performance_score(kSummary[0].total, -0.090), -4.509, 1e-12);
    EXPECT_NEAR(performance_score(kSummary[4].total, -0.090), -8.342, 1e-12);
    for (int i = 1; i < 4; ++i) {
        const double s = performance_score(kSummary[i].total, -0.090);
        EXPECT_LT(s, -4.509);
        EXPECT_GT(s, -8.342);
    }
}

TEST(AnalyzeSeries, ComponentsConsistent) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 0.02);
    std::vector<double> x(500), y(500), z(500);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = n(rng);
        y[i] = 0.01 + n(rng);
        z[i] = 0.2 + n(rng);
    }
    const MetricsReport r = analyze_series(x, y, z, Targets{}, 100.0, "run");
    EXPECT_NEAR(r.rms_total * r.rms_total, r.rms_x * r.rms_x + r.rms_y * r.rms_y + r.rms_z * r.rms_z, 1e-9);
    EXPECT_NEAR(r.score, -r.rms_total + r.stability, 1e-12);
    EXPECT_EQ(r.samples, 500u);
    EXPECT_EQ(r.label, "run");
    // Scale 100 reports centimetres.
    const MetricsReport m = analyze_series(x, y, z, Targets{});
    EXPECT_NEAR(r.rms_x, 100.0 * m.rms_x, 1e-12);
}

TEST(AnalyzeSeries, LengthMismatchThrows) {
    const std::vector<double> a(3, 0.0), b(4, 0.0);
    EXPECT_THROW(analyze_series(a, b, a, Targets{}), std::domain_error);
}

TEST(Report, CsvAndTable) {
    MetricsReport r;
    r.label = "test1";
    r.rms_x = 3.670;
    r.rms_y = 2.460;
    r.rms_z = 0.085;
    r.rms_total = 4.419;
    r.stability = -0.090;
    r.score = -4.509;
    const std::vector<MetricsReport> rows{r};
    std::ostringstream csv, table;
    write_report_csv(csv, rows);
    write_report_table(table, rows);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
              "label,rms_x,rms_y,rms_z,rms_total,sigma_x,sigma_y,sigma_z,stability,score,samples");
    EXPECT_NE(csv.str().find("test1,3.67,2.46,0.085,4.419"), std::string::npos);
    EXPECT_NE(table.str().find("4.419"), std::string::npos);
    EXPECT_NE(table.str().find("-4.509"), std::string::npos);
}
