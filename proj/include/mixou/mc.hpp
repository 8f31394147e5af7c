#pragma once

// Monte Carlo experiments: replicate (simulate mixed OU, estimate drift) over a
// parameter matrix, then summarize.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixou/detail/parallel.hpp"
#include "mixou/estimators.hpp"
#include "mixou/gaussgen.hpp"

namespace mixou {

struct ExperimentSpec {
    std::vector<double> H;
    std::vector<double> theta;
    std::vector<double> T;
    std::vector<double> delta;
    std::size_t reps = 1000;
    std::uint64_t seed = 0;
    GenMethod method = GenMethod::CIRCULANT;
    EstimatorKind estimator = EstimatorKind::ERGODIC;
    /// 0: take MIXOU_THREADS from the environment, else hardware concurrency.
    std::size_t threads = 0;

    void validate() const;
};

struct Cell {
    double H;
    double theta;
    double T;
    double delta;
    std::size_t n;  // round(T / delta)
};

/// Cross product H x theta x T x delta in that nesting order.
std::vector<Cell> cells_of(const ExperimentSpec& spec);

/// Replication seed: keyed hash of (master seed, cell parameters, replication index).
std::uint64_t replication_seed(std::uint64_t master, const Cell& cell, std::size_t r) noexcept;

struct CellResult {
    Cell cell;
    std::vector<std::optional<EstimateResult>> replications;  // index = replication r
    std::vector<std::string> errors;                          // one message per failed replication
    std::size_t failures = 0;
    /// More than 1% of the replications failed.
    bool failed = false;
};

/// Simulates a mixed OU path from X_0 = 0 with the Euler scheme and applies the chosen estimator.
EstimateResult run_replication(const Cell& cell, const MixedGenerator& gen, EstimatorKind estimator,
                               std::uint64_t seed);

/// Runs every cell; replications execute on a worker pool and are stored by index,
/// so the result is independent of scheduling and thread count.
std::vector<CellResult> run_experiment(const ExperimentSpec& spec);

/// Worker count from MIXOU_THREADS, falling back to the hardware concurrency.
std::size_t default_threads();

struct SummaryRow {
    double H;
    double theta_true;
    double T;
    double delta;
    std::size_t l;  // successful replications
    double mean;    // NaN marks a missing cell
    double sdev;
    bool missing() const noexcept;
};

using SummaryTable = std::vector<SummaryRow>;

/// Sample mean and standard deviation (divisor l - 1) of the successful replications.
SummaryRow summarize(const CellResult& result);
SummaryTable summarize(std::span<const CellResult> results);

/// Mean and sample standard deviation; sdev = 0 for a single value.
std::pair<double, double> mean_sdev(std::span<const double> values);

struct PhiStats {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double sdev = 0.0;      // divisor count - 1
    double skewness = 0.0;  // m3 / m2^{3/2}, population moments
    double kurtosis = 0.0;  // m4 / m2^2, non-excess (3 for a normal law)
};

PhiStats histogram_stats(std::span<const double> values);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> counts;
};

Histogram histogram(std::span<const double> values, std::size_t bins);

/// theta (H Gamma(2H) theta^{1-2H} + 1/2) sqrt(n delta) / sigma_H * (theta_tilde - theta).
double phi_statistic(double theta_tilde, std::size_t n, const HurstParam& H, double theta, double delta);

struct PhiRun {
    std::vector<double> phi;  // successful replications, in replication order
    std::size_t failures = 0;
    PhiStats stats;
    Histogram bins;
};

PhiRun run_phi(const HurstParam& H, double theta, double T, double delta, std::size_t reps, std::uint64_t seed,
               GenMethod method = GenMethod::CIRCULANT, std::size_t threads = 0);

}  // namespace mixou
