#pragma once

// Discrete pathwise stochastic integrals on a uniform grid.

#include <cstddef>
#include <span>

#include "mixou/gaussgen.hpp"

namespace mixou {

enum class IntegralScheme { SYMMETRIC, FORWARD, TRAPEZOID };

struct IntegralResult {
    double value = 0.0;
    IntegralScheme scheme = IntegralScheme::TRAPEZOID;
    std::size_t n = 0;
};

/// Trapezoid rule of sampled values with step delta.
double trapezoid(std::span<const double> f, double delta);
double trapezoid(const SamplePath& f);
/// Trapezoid rule of f^2; the denominator of every least-squares formula.
double trapezoid_squared(const SamplePath& f);

/// Midpoint sum  sum 1/2 (u_i + u_{i+1}) (xi_{i+1} - xi_i).
IntegralResult symmetric_integral(const SamplePath& u, const SamplePath& xi);

/// Left-point sum  sum u_i (xi_{i+1} - xi_i).
IntegralResult forward_integral(const SamplePath& u, const SamplePath& xi);

/// sum 1/2 (u_{i+1} - u_i)(xi_{i+1} - xi_i): symmetric minus forward, term by term.
double half_cross_variation(const SamplePath& u, const SamplePath& xi);

/// sum (x_{i+1} - x_i)^2.
double quadratic_variation(const SamplePath& x);

/// H(2H-1) int_0^T int_0^t u^{2H-2} e^{-theta u} du dt.
///
/// theta > 0 uses the lower incomplete gamma closed form
///   H(2H-1) [ T theta^{1-2H} gamma(2H-1, theta T) - theta^{-2H} gamma(2H, theta T) ],
/// theta <= 0 the (positive-term) power series of e^{-theta u}; theta = 0 gives T^{2H}/2.
double drift_correction(double theta, const HurstParam& H, double T);

/// Skorohod integral int_0^T X_t delta xi_t for an OU integrand X driven by xi, recovered
/// from the symmetric integral by subtracting the Malliavin trace terms:
///   symmetric(X, xi) - drift_correction(theta, H, T) - T/2.
double skorohod_xi_integral(const SamplePath& x, const SamplePath& xi, double theta, const HurstParam& H);

}  // namespace mixou
