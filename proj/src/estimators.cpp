#include "mixou/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "mixou/errors.hpp"
#include "mixou/stochint.hpp"

namespace mixou {

std::string_view to_string(EstimatorKind kind) noexcept {
    switch (kind) {
        case EstimatorKind::ERGODIC: return "ERGODIC";
        case EstimatorKind::LSE_NONERGODIC: return "LSE_NONERGODIC";
        case EstimatorKind::LSE_ORACLE: return "LSE_ORACLE";
        case EstimatorKind::CIR: return "CIR";
    }
    return "UNKNOWN";
}

std::string_view to_string(AsymptoticRegime regime) noexcept {
    switch (regime) {
        case AsymptoticRegime::CLT_LOW_H: return "CLT_LOW_H";
        case AsymptoticRegime::LOG_H34: return "LOG_H34";
        case AsymptoticRegime::ROSENBLATT: return "ROSENBLATT";
        case AsymptoticRegime::CAUCHY: return "CAUCHY";
    }
    return "UNKNOWN";
}

std::uint64_t digest(std::span<const double> values) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const double v : values) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof(double));
        for (const unsigned char b : bytes) {
            h ^= b;
            h *= 0x100000001B3ull;
        }
    }
    return h;
}

double p_func(double theta, const HurstParam& H) {
    if (!(theta > 0.0)) throw ArgumentError("p(theta) is defined for theta > 0 only");
    const double h = H.value();
    return std::pow(theta, -2.0 * h) * h * std::tgamma(2.0 * h) + 0.5 / theta;
}

RootResult p_inverse(double v, const HurstParam& H) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError("p_inverse needs a positive finite value");
    const double tol = 1e-10 * std::max(1.0, v);

    // p is strictly decreasing: need p(lo) >= v >= p(hi)
    double lo = 1.0, hi = 1.0;
    int k = 0;
    while (!(p_func(lo, H) >= v && p_func(hi, H) <= v)) {
        if (++k > 60) throw NumericalError("p_inverse: no bracket within [2^-60, 2^60] for v = " + std::to_string(v));
        lo = std::ldexp(1.0, -k);
        hi = std::ldexp(1.0, k);
    }

    RootResult r;
    double mid = std::sqrt(lo * hi);
    double f = p_func(mid, H) - v;
    while (std::abs(f) > tol) {
        if (++r.iterations > 400) throw NumericalError("p_inverse: bisection did not reach tolerance");
        if (f > 0.0)
            lo = mid;
        else
            hi = mid;
        // bisect in log scale while the bracket spans orders of magnitude
        const double next = hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (next == lo || next == hi) break;
        mid = next;
        f = p_func(mid, H) - v;
    }
    r.root = mid;
    r.residual = std::abs(f);
    if (r.residual > tol) throw NumericalError("p_inverse: bracket collapsed above tolerance");
    return r;
}

EstimateResult ergodic_estimator(std::span<const double> observations, const HurstParam& H) {
    if (observations.size() < 2) throw ArgumentError("ergodic estimator needs at least two observations");
    double sum = 0.0;
    for (const double x : observations) sum += x * x;
    const double mean_sq = sum / static_cast<double>(observations.size());
    if (!(mean_sq > 0.0)) throw DegenerateInputError("ergodic estimator: mean of squares is zero");
    if (!std::isfinite(mean_sq)) throw NumericalError("ergodic estimator: non-finite observations");
    const auto root = p_inverse(mean_sq, H);
    return {EstimatorKind::ERGODIC, root.root, root.iterations, root.residual, digest(observations)};
}

EstimateResult ergodic_estimator(const SamplePath& x, const HurstParam& H) {
    if (x.values.size() < 3) throw ArgumentError("ergodic estimator needs at least two observations");
    return ergodic_estimator(std::span<const double>(x.values).subspan(1), H);
}

EstimateResult lse_nonergodic(const SamplePath& x) {
    const double denom = trapezoid_squared(x);
    if (!(denom > 0.0)) throw DegenerateInputError("least squares: int X^2 dt is zero");
    const double xt = x.back();
    return {EstimatorKind::LSE_NONERGODIC, -xt * xt / (2.0 * denom), 0, 0.0, digest(x.values)};
}

EstimateResult lse_oracle(const SamplePath& x, double theta_true, const HurstParam& H) {
    const double denom = trapezoid_squared(x);
    if (!(denom > 0.0)) throw DegenerateInputError("least squares: int X^2 dt is zero");
    const double T = x.horizon();
    const double xt = x.back();
    const double value = (-0.5 * xt * xt + drift_correction(theta_true, H, T) + 0.5 * T) / denom;
    return {EstimatorKind::LSE_ORACLE, value, 0, 0.0, digest(x.values)};
}

EstimateResult cir_drift_estimator(const SamplePath& xtilde) {
    if (xtilde.values.size() < 2) throw ArgumentError("CIR estimator needs at least two points");
    SamplePath y{xtilde.grid, std::vector<double>(xtilde.values.size()), PathKind::MOU, xtilde.seed};
    for (std::size_t i = 0; i < xtilde.values.size(); ++i) {
        if (!(xtilde.values[i] > 0.0))
            throw DomainError("CIR path absorbed at t = " + std::to_string(xtilde.grid.at(i)) +
                              "; drift estimator undefined after tau");
        y.values[i] = std::sqrt(xtilde.values[i]);
    }
    const double denom = trapezoid_squared(y);
    const double y0 = y.values.front();
    const double yt = y.values.back();
    const double theta = -(yt * yt - y0 * y0) / (2.0 * denom);
    return {EstimatorKind::CIR, -2.0 * theta, 0, 0.0, digest(xtilde.values)};
}

double sigma_h(double theta, const HurstParam& H) {
    const double h = H.value();
    if (H.is_half_limit() || h >= 0.75) throw RegimeError("sigma_H is defined for H in (1/2, 3/4) only");
    if (!(theta > 0.0)) throw RegimeError("sigma_H is defined for the ergodic case theta > 0");
    const double g2h = std::tgamma(2.0 * h);
    const double ratio = g2h * std::tgamma(3.0 - 4.0 * h) * std::tgamma(4.0 * h - 1.0) / std::tgamma(2.0 - 2.0 * h);
    const double num = std::pow(theta, 1.0 - 4.0 * h) * h * h * (4.0 * h - 1.0) * (g2h * g2h + ratio) + 0.5 / theta;
    const double value = std::sqrt(num) / p_func(theta, H);
    if (!std::isfinite(value)) throw RegimeError("sigma_H is not finite this close to H = 3/4");
    return value;
}

double gamma_h(double theta, const HurstParam& H) {
    if (!(theta < 0.0)) throw RegimeError("gamma_H belongs to the explosive case theta < 0");
    const double h = H.value();
    const double a = std::abs(theta);
    return std::sqrt(0.5 / a + std::pow(a, 2.0 * h) * h * std::tgamma(2.0 * h));
}

AsymptoticScales asymptotic_scales(double theta, const HurstParam& H) {
    if (H.is_half_limit()) throw ArgumentError("asymptotic scales require H > 1/2");
    if (theta == 0.0) throw RegimeError("theta = 0 has no asymptotic regime");
    AsymptoticScales s;
    if (theta < 0.0) {
        s.regime = AsymptoticRegime::CAUCHY;
        s.gammaH = gamma_h(theta, H);
        return s;
    }
    const double h = H.value();
    if (h < 0.75) {
        s.regime = AsymptoticRegime::CLT_LOW_H;
        s.sigmaH = sigma_h(theta, H);
    } else if (h == 0.75) {
        s.regime = AsymptoticRegime::LOG_H34;
        s.log_variance = 4.0 * theta / std::numbers::pi;
    } else {
        s.regime = AsymptoticRegime::ROSENBLATT;
        s.rosenblatt_scale = -std::pow(theta, 2.0 * h - 1.0) / (h * std::tgamma(2.0 * h));
    }
    return s;
}

}  // namespace mixou
