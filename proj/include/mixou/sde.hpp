#pragma once

// Euler schemes for the mixed fractional Ornstein-Uhlenbeck process
//   dX_t = -theta X_t dt + d xi_t
// and the mixed fractional CIR process represented through its square root.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "mixou/gaussgen.hpp"

namespace mixou {

struct ModelParams {
    HurstParam H;
    double theta;
    double T;
    std::size_t n;
    double x0 = 0.0;

    /// Validates T > 0, n >= 1 and the stability guard delta * |theta| < 1.
    ModelParams(HurstParam hurst, double drift, double horizon, std::size_t steps, double initial = 0.0);

    double delta() const noexcept { return T / static_cast<double>(n); }
    TimeGrid grid() const { return TimeGrid(n, delta()); }
};

struct CirParams {
    double a;
    double x0;

    CirParams(double drift, double initial);
    double atilde() const noexcept { return 0.5 * a; }
    double y0() const;
};

/// x_{i+1} = x_i + rate * delta * x_i + dxi_i. Shared core of both recursions.
std::vector<double> euler_linear(double rate, double delta, double x0, std::span<const double> dxi);

/// X_{(i+1)d} = X_{id} - theta d X_{id} + (xi_{(i+1)d} - xi_{id}), X_0 = params.x0.
SamplePath euler_mou(const ModelParams& params, const SamplePath& xi);

SamplePath simulate_mou(const ModelParams& params, const GeneratorConfig& config, std::uint64_t seed);

struct StationaryPath {
    SamplePath path;
    std::size_t burn_steps = 0;
    /// e^{-theta * burn_in}: factor by which the initial-condition bias has decayed.
    double decay_factor = 1.0;
};

/// Simulates on [-burn_in, T] from x0 and returns the part on [0, T].
StationaryPath simulate_mou_stationary(const ModelParams& params, double burn_in, const GeneratorConfig& config,
                                       std::uint64_t seed);

struct CirPath {
    SamplePath xtilde;               // Ytilde^2 up to tau, 0 afterwards
    SamplePath ytilde;               // the underlying mixed OU path with drift +a/2
    std::optional<double> tau;       // first grid time with Ytilde <= 0
    std::optional<std::size_t> tau_index;
};

/// Ytilde solves dY = (a/2) Y dt + d xi, Y_0 = sqrt(x0); Xtilde = Y^2 1{t <= tau}.
/// Uses H, T and n from `params`; its theta and x0 are ignored.
CirPath simulate_mcir(const CirParams& cp, const ModelParams& params, const GeneratorConfig& config,
                      std::uint64_t seed);

/// Absorption applied to an already simulated Ytilde.
CirPath cir_from_ytilde(SamplePath ytilde);

}  // namespace mixou
