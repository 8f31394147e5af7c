#include <gtest/gtest.h>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <cstdlib>
#include <set>
#include <vector>

#include "mixou/errors.hpp"
#include "mixou/mc.hpp"
#include "mixou/report.hpp"
#include "oracles.hpp"

using namespace mixou;

namespace {

ExperimentSpec small_spec() {
    ExperimentSpec spec;
    spec.H = {0.55};
    spec.theta = {0.5};
    spec.T = {10.0};
    spec.delta = {0.01};
    spec.reps = 40;
    spec.seed = 99;
    spec.threads = 1;
    return spec;
}

CellResult fake_result(std::vector<double> values, std::size_t failures = 0) {
    CellResult r;
    r.cell = {0.55, 0.5, 10.0, 0.01, 1000};
    for (const double v : values) r.replications.push_back(EstimateResult{EstimatorKind::ERGODIC, v, 0, 0.0, 0});
    for (std::size_t k = 0; k < failures; ++k) r.replications.push_back(std::nullopt);
    r.failures = failures;
    r.failed = static_cast<double>(failures) > 0.01 * static_cast<double>(r.replications.size());
    return r;
}

}  // namespace

TEST(Summary, TrivialSamples) {
    const auto c = summarize(fake_result({0.3, 0.3, 0.3}));
    EXPECT_EQ(c.mean, 0.3);
    EXPECT_EQ(c.sdev, 0.0);
    EXPECT_EQ(c.l, 3u);
    const auto two = summarize(fake_result({0.0, 2.0}));
    EXPECT_EQ(two.mean, 1.0);
    EXPECT_DOUBLE_EQ(two.sdev, std::sqrt(2.0));
    EXPECT_EQ(mean_sdev(std::vector<double>{4.0}).second, 0.0);
    EXPECT_THROW(mean_sdev(std::vector<double>{}), ArgumentError);
}

TEST(Summary, FailedCellIsMissing) {
    const auto row = summarize(fake_result({0.1, 0.2}, 1));
    EXPECT_TRUE(row.missing());
    EXPECT_EQ(row.l, 2u);
    EXPECT_FALSE(summarize(fake_result(std::vector<double>(200, 0.5), 1)).missing());
}

TEST(Experiment, CellsAndValidation) {
    auto spec = small_spec();
    spec.H = {0.55, 0.75};
    spec.theta = {0.1, 0.5};
    const auto cells = cells_of(spec);
    ASSERT_EQ(cells.size(), 4u);
    EXPECT_EQ(cells[1].H, 0.55);
    EXPECT_EQ(cells[1].theta, 0.5);
    EXPECT_EQ(cells[2].H, 0.75);
    EXPECT_EQ(cells[0].n, 1000u);

    auto bad = small_spec();
    bad.T = {10.005};
    EXPECT_THROW(bad.validate(), ArgumentError);
    bad = small_spec();
    bad.theta = {-0.5};
    EXPECT_THROW(bad.validate(), RegimeError);
    bad.estimator = EstimatorKind::LSE_NONERGODIC;
    EXPECT_NO_THROW(bad.validate());
    bad = small_spec();
    bad.theta = {150.0};
    EXPECT_THROW(bad.validate(), ArgumentError);
    bad = small_spec();
    bad.reps = 0;
    EXPECT_THROW(bad.validate(), ArgumentError);
}

TEST(Experiment, ReplicationSeedsDistinct) {
    const Cell a{0.55, 0.5, 10.0, 0.01, 1000}, b{0.55, 0.1, 10.0, 0.01, 1000};
    std::set<std::uint64_t> seeds;
    for (std::size_t r = 0; r < 1000; ++r) {
        seeds.insert(replication_seed(1, a, r));
        seeds.insert(replication_seed(1, b, r));
        seeds.insert(replication_seed(2, a, r));
    }
    EXPECT_EQ(seeds.size(), 3000u);
}

TEST(Experiment, SingleReplicationIsDeterministic) {
    auto spec = small_spec();
    spec.reps = 1;
    const auto a = run_experiment(spec), b = run_experiment(spec);
    ASSERT_TRUE(a[0].replications[0] && b[0].replications[0]);
    EXPECT_EQ(a[0].replications[0]->value, b[0].replications[0]->value);
    EXPECT_EQ(a[0].replications[0]->inputs_digest, b[0].replications[0]->inputs_digest);
}

TEST(Experiment, IndependentOfThreadCount) {
    auto spec = small_spec();
    const auto one = summarize(run_experiment(spec));
    for (const std::size_t t : {2u, 5u}) {
        spec.threads = t;
        const auto many = run_experiment(spec);
        EXPECT_EQ(emit_report(summarize(many), ReportFormat::CSV), emit_report(one, ReportFormat::CSV));
    }
}

TEST(Experiment, EnvironmentThreadCount) {
    ::setenv("MIXOU_THREADS", "3", 1);
    EXPECT_EQ(default_threads(), 3u);
    ::setenv("MIXOU_THREADS", "garbage", 1);
    EXPECT_GE(default_threads(), 1u);
    ::unsetenv("MIXOU_THREADS");
}

TEST(Experiment, ErgodicErrorShrinksWithHorizon) {
    double prev = INFINITY;
    for (const double T : {20.0, 50.0, 100.0}) {
        auto spec = small_spec();
        spec.T = {T};
        spec.delta = {0.05};
        spec.reps = 200;
        const auto res = run_experiment(spec);
        double mae = 0.0;
        for (const auto& r : res[0].replications) mae += std::abs(r.value().value - 0.5);
        mae /= 200.0;
        EXPECT_LT(mae, prev) << "T=" << T;
        prev = mae;
    }
}

TEST(Experiment, MeanNearStationaryInverse) {
    // The ergodic estimator is p^{-1} of a time average whose mean is p(theta); with T = 100 the
    // Jensen bias of p^{-1} stays within a few hundredths at theta = 0.5.
    auto spec = small_spec();
    spec.T = {100.0};
    spec.delta = {1.0 / 12.0};
    spec.reps = 200;
    const auto row = summarize(run_experiment(spec))[0];
    // sqrt(2 theta / T) is the leading-order spread of the estimator
    EXPECT_NEAR(row.mean, 0.5, 3.0 * 0.1 / std::sqrt(200.0) + 0.03);
    EXPECT_NEAR(row.sdev, 0.1, 0.03);
}

TEST(HistogramStats, SmallSets) {
    const auto s = histogram_stats(std::vector<double>{-2.0, -1.0, 1.0, 2.0});
    EXPECT_EQ(s.mean, 0.0);
    EXPECT_EQ(s.median, 0.0);
    EXPECT_EQ(s.skewness, 0.0);
    EXPECT_DOUBLE_EQ(s.sdev, std::sqrt(10.0 / 3.0));
    // m4 / m2^2 = (34/4) / (10/4)^2
    EXPECT_DOUBLE_EQ(s.kurtosis, 8.5 / 6.25);
    EXPECT_EQ(histogram_stats(std::vector<double>{5.0, 1.0, 3.0, 2.0, 4.0}).median, 3.0);
    // three values sit below the four-value minimum
    EXPECT_THROW(histogram_stats(std::vector<double>{-1.0, 0.0, 1.0}), ArgumentError);
}

TEST(HistogramStats, StandardNormal) {
    boost::random::mt19937_64 gen(20240601);
    boost::random::normal_distribution<double> z;
    std::vector<double> v(1000000);
    for (auto& x : v) x = z(gen);
    const auto s = histogram_stats(v);
    const double n = static_cast<double>(v.size());
    EXPECT_NEAR(s.mean, 0.0, 3.0 / std::sqrt(n));
    EXPECT_NEAR(s.sdev, 1.0, 3.0 * std::sqrt(0.5 / n));
    EXPECT_NEAR(s.skewness, 0.0, 3.0 * std::sqrt(6.0 / n));
    EXPECT_NEAR(s.kurtosis, 3.0, 3.0 * std::sqrt(24.0 / n));
    EXPECT_NEAR(s.median, 0.0, 3.0 * 1.2533 / std::sqrt(n));
}

TEST(HistogramStats, Bins) {
    const auto h = histogram(std::vector<double>{0.0, 0.1, 0.5, 0.9, 1.0}, 2);
    EXPECT_EQ(h.lo, 0.0);
    EXPECT_EQ(h.hi, 1.0);
    EXPECT_EQ(h.counts, (std::vector<std::size_t>{2, 3}));
    EXPECT_EQ(histogram(std::vector<double>{2.0, 2.0}, 3).counts[0], 2u);
    EXPECT_THROW(histogram(std::vector<double>{}, 3), ArgumentError);
}

TEST(Phi, ScaleAndRegimes) {
    const HurstParam H(0.618);
    EXPECT_EQ(phi_statistic(0.1, 1200, H, 0.1, 1.0 / 12.0), 0.0);
    const double a = phi_statistic(0.2, 1200, H, 0.1, 1.0 / 12.0);
    EXPECT_NEAR(phi_statistic(0.3, 1200, H, 0.1, 1.0 / 12.0), 2.0 * a, 1e-12 * std::abs(a));
    const double h = 0.618, th = 0.1;
    const double expected = th * (h * std::tgamma(2 * h) * std::pow(th, 1 - 2 * h) + 0.5) * 10.0 / sigma_h(th, H) * 0.1;
    EXPECT_NEAR(a, expected, 1e-12 * expected);
    EXPECT_THROW(phi_statistic(0.2, 1200, HurstParam(0.8), 0.1, 1.0 / 12.0), RegimeError);
    EXPECT_THROW(phi_statistic(0.2, 1200, H, -0.1, 1.0 / 12.0), RegimeError);
}

TEST(Report, CsvLayoutAndRoundTrip) {
    EXPECT_EQ(emit_report(SummaryTable{}, ReportFormat::CSV), "H,theta_true,T,delta,l,mean,sdev\n");
    const double nan = std::nan("");
    const SummaryTable t{{0.55, 0.1, 100.0, 1.0 / 250.0, 200, 0.1080123456789, 0.0364}, {0.75, 0.5, 20.0, 0.5, 3, nan, nan}};
    const auto csv = emit_report(t, ReportFormat::CSV);
    EXPECT_NE(csv.find(",NA,NA\n"), std::string::npos);
    const auto back = parse_summary_csv(csv);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].delta, 1.0 / 250.0);
    EXPECT_EQ(back[0].mean, t[0].mean);
    EXPECT_EQ(back[0].l, 200u);
    EXPECT_TRUE(back[1].missing());
    EXPECT_EQ(emit_report(back, ReportFormat::CSV), csv);
    EXPECT_THROW(parse_summary_csv("H,theta\n"), ArgumentError);
    EXPECT_THROW(parse_format("xml"), ArgumentError);
    EXPECT_EQ(parse_format("json"), ReportFormat::JSON);
}

TEST(Report, JsonSummary) {
    const SummaryTable t{{0.55, 0.1, 100.0, 0.004, 200, 0.108, 0.0364}, {0.75, 0.5, 20.0, 0.5, 3, std::nan(""), std::nan("")}};
    const auto j = nlohmann::json::parse(emit_report(t, ReportFormat::JSON));
    EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
    EXPECT_EQ(j["kind"], "summary_table");
    ASSERT_EQ(j["rows"].size(), 2u);
    EXPECT_EQ(j["rows"][0]["mean"].get<double>(), 0.108);
    EXPECT_TRUE(j["rows"][1]["mean"].is_null());
    EXPECT_TRUE(j["rows"][1]["missing"].get<bool>());
}

TEST(Config, Parsing) {
    const auto spec = parse_experiment_config(
        "# table cell\n"
        "H = [0.55, 0.75]\n"
        "theta = [0.1, 0.5]   # two drifts\n"
        "T = [100]\n"
        "delta = [1/250]\n"
        "reps = 200\n"
        "seed = 7\n"
        "method = cholesky\n"
        "estimator = lse\n");
    EXPECT_EQ(spec.H, (std::vector<double>{0.55, 0.75}));
    EXPECT_EQ(spec.delta, (std::vector<double>{1.0 / 250.0}));
    EXPECT_EQ(spec.reps, 200u);
    EXPECT_EQ(spec.seed, 7u);
    EXPECT_EQ(spec.method, GenMethod::CHOLESKY);
    EXPECT_EQ(spec.estimator, EstimatorKind::LSE_NONERGODIC);

    const std::string base = "H = [0.55]\ntheta = [0.5]\nT = [10]\ndelta = [0.1]\n";
    EXPECT_NO_THROW(parse_experiment_config(base));
    EXPECT_THROW(parse_experiment_config(base + "colour = red\n"), ArgumentError);
    EXPECT_THROW(parse_experiment_config(base + "H = [0.6]\n"), ArgumentError);
    EXPECT_THROW(parse_experiment_config(base + "reps = many\n"), ArgumentError);
    EXPECT_THROW(parse_experiment_config("H = [0.55]\n"), ArgumentError);
}
