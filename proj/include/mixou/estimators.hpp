#pragma once

// Drift estimators for the mixed fractional OU process and the scale
// constants of their limit laws.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "mixou/gaussgen.hpp"

namespace mixou {

enum class EstimatorKind { ERGODIC, LSE_NONERGODIC, LSE_ORACLE, CIR };

std::string_view to_string(EstimatorKind kind) noexcept;

struct EstimateResult {
    EstimatorKind name = EstimatorKind::ERGODIC;
    double value = 0.0;
    int iterations = 0;
    double residual = 0.0;
    std::uint64_t inputs_digest = 0;
};

/// FNV-1a over the raw bytes of the observations; identifies the input of an estimate.
std::uint64_t digest(std::span<const double> values) noexcept;

/// Stationary second moment of the mixed OU process:
///   p(theta) = theta^{-2H} H Gamma(2H) + 1/(2 theta),  theta > 0.
double p_func(double theta, const HurstParam& H);

struct RootResult {
    double root = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

/// Unique theta > 0 with p(theta) = v. Geometric bracketing on [2^-k, 2^k] (k <= 60)
/// followed by bisection until |p(theta) - v| <= 1e-10 max(1, v).
RootResult p_inverse(double v, const HurstParam& H);

/// p^{-1}( (1/n) sum_{i=1}^n X_{i delta}^2 ) over the observations X_delta..X_{n delta}.
EstimateResult ergodic_estimator(std::span<const double> observations, const HurstParam& H);
/// Drops X_0 and estimates from the rest of the path.
EstimateResult ergodic_estimator(const SamplePath& x, const HurstParam& H);

/// -X_T^2 / (2 int_0^T X_t^2 dt).
EstimateResult lse_nonergodic(const SamplePath& x);

/// Least-squares value with the true drift plugged into the correction term:
///   -X_T^2/(2 I) + drift_correction(theta, H, T)/I + T/(2 I),  I = int_0^T X_t^2 dt.
/// A study tool only: it needs the parameter it is supposed to estimate.
EstimateResult lse_oracle(const SamplePath& x, double theta_true, const HurstParam& H);

/// Drift a of the mixed CIR process from an observed Xtilde path.
///
/// Ytilde = sqrt(Xtilde) follows dY = (a/2) Y dt + d xi, i.e. the OU equation with
/// theta = -a/2. The least-squares value for that theta is
///   -(Y_T^2 - Y_0^2) / (2 int Y^2)
/// (Y_0 != 0 here, so its square is kept), and a = -2 theta.
EstimateResult cir_drift_estimator(const SamplePath& xtilde);

enum class AsymptoticRegime { CLT_LOW_H, LOG_H34, ROSENBLATT, CAUCHY };

std::string_view to_string(AsymptoticRegime regime) noexcept;

struct AsymptoticScales {
    AsymptoticRegime regime = AsymptoticRegime::CLT_LOW_H;
    std::optional<double> sigmaH;             // CLT_LOW_H: sqrt(T)(theta_hat - theta) -> N(0, sigmaH^2)
    std::optional<double> log_variance;       // LOG_H34: 4 theta / pi
    std::optional<double> rosenblatt_scale;   // ROSENBLATT: -theta^{2H-1} / (H Gamma(2H))
    std::optional<double> gammaH;             // CAUCHY
};

/// sigma_H for H in (1/2, 3/4), theta > 0. Throws RegimeError at or above 3/4
/// (Gamma(3-4H) has its pole at H = 3/4).
double sigma_h(double theta, const HurstParam& H);

/// gamma_H = sqrt(1/(2|theta|) + |theta|^{2H} H Gamma(2H)) for the explosive case theta < 0.
double gamma_h(double theta, const HurstParam& H);

AsymptoticScales asymptotic_scales(double theta, const HurstParam& H);

}  // namespace mixou
