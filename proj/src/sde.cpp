#include "mixou/sde.hpp"

#include <cmath>
#include <string>

#include "mixou/errors.hpp"

namespace mixou {

ModelParams::ModelParams(HurstParam hurst, double drift, double horizon, std::size_t steps, double initial)
    : H(hurst), theta(drift), T(horizon), n(steps), x0(initial) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ArgumentError("horizon T must be positive");
    if (steps == 0) throw ArgumentError("number of steps n must be positive");
    if (!std::isfinite(drift)) throw ArgumentError("theta must be finite");
    if (!(delta() * std::abs(drift) < 1.0))
        throw ArgumentError("Euler stability guard violated: delta*|theta| = " + std::to_string(delta() * std::abs(drift)));
}

CirParams::CirParams(double drift, double initial) : a(drift), x0(initial) {
    if (!(drift > 0.0)) throw ArgumentError("CIR drift a must be positive");
    if (!(initial > 0.0)) throw ArgumentError("CIR initial value must be positive");
}

double CirParams::y0() const { return std::sqrt(x0); }

std::vector<double> euler_linear(double rate, double delta, double x0, std::span<const double> dxi) {
    std::vector<double> x(dxi.size() + 1);
    x[0] = x0;
    const double step = rate * delta;
    for (std::size_t i = 0; i < dxi.size(); ++i) x[i + 1] = x[i] + step * x[i] + dxi[i];
    return x;
}

namespace {

std::vector<double> increments_of(const SamplePath& path) {
    std::vector<double> d(path.values.size() - 1);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = path.values[i + 1] - path.values[i];
    return d;
}

void check_grid(const ModelParams& params, const SamplePath& xi) {
    if (xi.values.size() != xi.grid.points()) throw ArgumentError("path length does not match its grid");
    if (xi.grid.n != params.n || std::abs(xi.grid.delta - params.delta()) > 1e-12 * params.delta())
        throw ArgumentError("noise path grid does not match model grid");
}

}  // namespace

SamplePath euler_mou(const ModelParams& params, const SamplePath& xi) {
    check_grid(params, xi);
    if (xi.label != PathKind::MFBM) throw ArgumentError("euler_mou expects a mixed fBm driving path");
    const auto dxi = increments_of(xi);
    return {xi.grid, euler_linear(-params.theta, params.delta(), params.x0, dxi), PathKind::MOU, xi.seed};
}

SamplePath simulate_mou(const ModelParams& params, const GeneratorConfig& config, std::uint64_t seed) {
    const auto noise = sample_mixed(params.grid(), params.H, config, seed);
    return euler_mou(params, noise.xi);
}

StationaryPath simulate_mou_stationary(const ModelParams& params, double burn_in, const GeneratorConfig& config,
                                       std::uint64_t seed) {
    if (!(params.theta > 0.0)) throw RegimeError("stationary solution exists only for theta > 0");
    if (burn_in < 0.0) throw ArgumentError("burn-in must be non-negative");
    if (burn_in == 0.0) return {simulate_mou(params, config, seed), 0, 1.0};
    if (burn_in < 5.0 / params.theta) throw ArgumentError("burn-in must be at least 5/theta");

    const double delta = params.delta();
    const auto burn_steps = static_cast<std::size_t>(std::ceil(burn_in / delta - 1e-9));
    const TimeGrid long_grid(params.n + burn_steps, delta);
    const auto noise = sample_mixed(long_grid, params.H, config, seed);
    const auto dxi = increments_of(noise.xi);
    const auto x = euler_linear(-params.theta, delta, params.x0, dxi);

    StationaryPath out;
    out.path = {params.grid(), std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(burn_steps), x.end()),
                PathKind::STATIONARY_MOU, seed};
    out.burn_steps = burn_steps;
    out.decay_factor = std::exp(-params.theta * static_cast<double>(burn_steps) * delta);
    return out;
}

CirPath cir_from_ytilde(SamplePath ytilde) {
    CirPath out;
    out.xtilde = {ytilde.grid, std::vector<double>(ytilde.values.size(), 0.0), PathKind::MCIR, ytilde.seed};
    for (std::size_t i = 0; i < ytilde.values.size(); ++i) {
        const double y = ytilde.values[i];
        if (y <= 0.0) {
            out.tau = ytilde.grid.at(i);
            out.tau_index = i;
            break;
        }
        out.xtilde.values[i] = y * y;
    }
    out.ytilde = std::move(ytilde);
    return out;
}

CirPath simulate_mcir(const CirParams& cp, const ModelParams& params, const GeneratorConfig& config,
                      std::uint64_t seed) {
    const auto noise = sample_mixed(params.grid(), params.H, config, seed);
    const auto dxi = increments_of(noise.xi);
    SamplePath y{params.grid(), euler_linear(cp.atilde(), params.delta(), cp.y0(), dxi), PathKind::MOU, seed};
    return cir_from_ytilde(std::move(y));
}

}  // namespace mixou
