#include "mixou/mc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "mixou/errors.hpp"
#include "mixou/sde.hpp"
#include "mixou/stochint.hpp"

namespace mixou {

void ExperimentSpec::validate() const {
    if (H.empty() || theta.empty() || T.empty() || delta.empty())
        throw ArgumentError("experiment needs non-empty H, theta, T and delta lists");
    if (reps < 1) throw ArgumentError("experiment needs at least one replication");
    for (const double h : H) HurstParam{h};
    for (const double t : T)
        if (!(t > 0.0)) throw ArgumentError("horizons T must be positive");
    for (const double d : delta)
        if (!(d > 0.0)) throw ArgumentError("sampling intervals must be positive");
    if (estimator == EstimatorKind::CIR) throw ArgumentError("the CIR estimator is not a table estimator");
    if (estimator == EstimatorKind::ERGODIC)
        for (const double th : theta)
            if (!(th > 0.0)) throw RegimeError("the ergodic estimator needs theta > 0");
    for (const auto& c : cells_of(*this))
        if (!(c.delta * std::abs(c.theta) < 1.0)) throw ArgumentError("Euler stability guard violated in a cell");
}

std::vector<Cell> cells_of(const ExperimentSpec& spec) {
    std::vector<Cell> out;
    for (const double h : spec.H)
        for (const double th : spec.theta)
            for (const double t : spec.T)
                for (const double d : spec.delta) {
                    const double steps = std::round(t / d);
                    if (steps < 2.0 || std::abs(steps * d - t) > 1e-9 * t)
                        throw ArgumentError("T = " + std::to_string(t) + " is not a multiple of delta = " +
                                            std::to_string(d));
                    out.push_back({h, th, t, d, static_cast<std::size_t>(steps)});
                }
    return out;
}

std::uint64_t replication_seed(std::uint64_t master, const Cell& cell, std::size_t r) noexcept {
    return derive_seed(master, {std::bit_cast<std::uint64_t>(cell.H), std::bit_cast<std::uint64_t>(cell.theta),
                                std::bit_cast<std::uint64_t>(cell.T), std::bit_cast<std::uint64_t>(cell.delta),
                                static_cast<std::uint64_t>(r)});
}

std::size_t default_threads() {
    if (const char* env = std::getenv("MIXOU_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

EstimateResult run_replication(const Cell& cell, const MixedGenerator& gen, EstimatorKind estimator,
                               std::uint64_t seed) {
    const auto dxi = gen.xi_increments(seed);
    SamplePath x{gen.grid(), euler_linear(-cell.theta, cell.delta, 0.0, dxi), PathKind::MOU, seed};
    const HurstParam H(cell.H);
    switch (estimator) {
        case EstimatorKind::ERGODIC: return ergodic_estimator(x, H);
        case EstimatorKind::LSE_NONERGODIC: return lse_nonergodic(x);
        case EstimatorKind::LSE_ORACLE: return lse_oracle(x, cell.theta, H);
        case EstimatorKind::CIR: break;
    }
    throw ArgumentError("unsupported estimator for a replication");
}

std::vector<CellResult> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const auto cells = cells_of(spec);
    const std::size_t threads = spec.threads == 0 ? default_threads() : spec.threads;
    const GeneratorConfig config{spec.method};

    std::vector<CellResult> results;
    results.reserve(cells.size());
    for (const auto& cell : cells) {
        const MixedGenerator gen(TimeGrid(cell.n, cell.delta), HurstParam(cell.H), config);
        CellResult res{cell, std::vector<std::optional<EstimateResult>>(spec.reps),
                       std::vector<std::string>(spec.reps), 0, false};
        parallel_for(spec.reps, threads, [&](std::size_t r) {
            try {
                res.replications[r] = run_replication(cell, gen, spec.estimator, replication_seed(spec.seed, cell, r));
            } catch (const std::exception& e) {
                res.errors[r] = e.what();
            }
        });
        std::vector<std::string> errors;
        for (std::size_t r = 0; r < spec.reps; ++r)
            if (!res.replications[r]) errors.push_back("replication " + std::to_string(r) + ": " + res.errors[r]);
        res.errors = std::move(errors);
        res.failures = res.errors.size();
        res.failed = static_cast<double>(res.failures) > 0.01 * static_cast<double>(spec.reps);
        results.push_back(std::move(res));
    }
    return results;
}

bool SummaryRow::missing() const noexcept { return std::isnan(mean); }

std::pair<double, double> mean_sdev(std::span<const double> values) {
    if (values.empty()) throw ArgumentError("mean of an empty sample");
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

SummaryRow summarize(const CellResult& result) {
    const auto& c = result.cell;
    std::vector<double> values;
    for (const auto& r : result.replications)
        if (r) values.push_back(r->value);
    SummaryRow row{c.H, c.theta, c.T, c.delta, values.size(), std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()};
    if (result.failed || values.empty()) return row;
    std::tie(row.mean, row.sdev) = mean_sdev(values);
    return row;
}

SummaryTable summarize(std::span<const CellResult> results) {
    SummaryTable table;
    table.reserve(results.size());
    for (const auto& r : results) table.push_back(summarize(r));
    return table;
}

PhiStats histogram_stats(std::span<const double> values) {
    if (values.size() < 4) throw ArgumentError("statistics need at least 4 values");
    PhiStats s;
    s.count = values.size();
    const auto n = static_cast<double>(values.size());
    std::tie(s.mean, s.sdev) = mean_sdev(values);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const double v : values) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return s;
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
    if (values.empty() || bins == 0) throw ArgumentError("histogram needs values and at least one bin");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    Histogram h{*lo, *hi, std::vector<std::size_t>(bins, 0)};
    const double width = (h.hi - h.lo) / static_cast<double>(bins);
    for (const double v : values) {
        std::size_t b = width > 0.0 ? static_cast<std::size_t>((v - h.lo) / width) : 0;
        h.counts[std::min(b, bins - 1)]++;
    }
    return h;
}

double phi_statistic(double theta_tilde, std::size_t n, const HurstParam& H, double theta, double delta) {
    const double sigma = sigma_h(theta, H);  // RegimeError outside (1/2, 3/4), theta > 0
    const double h = H.value();
    const double scale = theta * (h * std::tgamma(2.0 * h) * std::pow(theta, 1.0 - 2.0 * h) + 0.5) *
                         std::sqrt(static_cast<double>(n) * delta) / sigma;
    return scale * (theta_tilde - theta);
}

PhiRun run_phi(const HurstParam& H, double theta, double T, double delta, std::size_t reps, std::uint64_t seed,
               GenMethod method, std::size_t threads) {
    ExperimentSpec spec;
    spec.H = {H.value()};
    spec.theta = {theta};
    spec.T = {T};
    spec.delta = {delta};
    spec.reps = reps;
    spec.seed = seed;
    spec.method = method;
    spec.threads = threads;
    sigma_h(theta, H);  // fail fast outside the CLT branch

    const auto results = run_experiment(spec);
    const auto& cell = results.front();
    PhiRun run;
    run.failures = cell.failures;
    for (const auto& r : cell.replications)
        if (r) run.phi.push_back(phi_statistic(r->value, cell.cell.n, H, theta, delta));
    if (run.phi.size() >= 4) {
        run.stats = histogram_stats(run.phi);
        run.bins = histogram(run.phi, 40);
    }
    return run;
}

}  // namespace mixou
