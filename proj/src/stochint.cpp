#include "mixou/stochint.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

#include "mixou/errors.hpp"

namespace mixou {

namespace {

void check_path(const SamplePath& p) {
    if (p.values.size() < 2) throw ArgumentError("path needs at least two points");
    if (p.values.size() != p.grid.points()) throw ArgumentError("path length does not match its grid");
}

void check_same_grid(const SamplePath& a, const SamplePath& b) {
    check_path(a);
    check_path(b);
    if (a.grid.n != b.grid.n || std::abs(a.grid.delta - b.grid.delta) > 1e-12 * a.grid.delta)
        throw ArgumentError("integrand and integrator are on different grids");
}

}  // namespace

double trapezoid(std::span<const double> f, double delta) {
    if (f.empty()) throw ArgumentError("trapezoid of an empty path");
    if (f.size() == 1) return 0.0;
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) interior += f[i];
    return delta * (interior + 0.5 * (f.front() + f.back()));
}

double trapezoid(const SamplePath& f) {
    if (f.values.empty()) throw ArgumentError("trapezoid of an empty path");
    return trapezoid(f.values, f.grid.delta);
}

double trapezoid_squared(const SamplePath& f) {
    if (f.values.empty()) throw ArgumentError("trapezoid of an empty path");
    const auto& v = f.values;
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) interior += v[i] * v[i];
    if (v.size() == 1) return 0.0;
    return f.grid.delta * (interior + 0.5 * (v.front() * v.front() + v.back() * v.back()));
}

IntegralResult symmetric_integral(const SamplePath& u, const SamplePath& xi) {
    check_same_grid(u, xi);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < u.values.size(); ++i)
        sum += 0.5 * (u.values[i] + u.values[i + 1]) * (xi.values[i + 1] - xi.values[i]);
    return {sum, IntegralScheme::SYMMETRIC, u.grid.n};
}

IntegralResult forward_integral(const SamplePath& u, const SamplePath& xi) {
    check_same_grid(u, xi);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < u.values.size(); ++i) sum += u.values[i] * (xi.values[i + 1] - xi.values[i]);
    return {sum, IntegralScheme::FORWARD, u.grid.n};
}

double half_cross_variation(const SamplePath& u, const SamplePath& xi) {
    check_same_grid(u, xi);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < u.values.size(); ++i)
        sum += 0.5 * (u.values[i + 1] - u.values[i]) * (xi.values[i + 1] - xi.values[i]);
    return sum;
}

double quadratic_variation(const SamplePath& x) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.values.size(); ++i) {
        const double d = x.values[i + 1] - x.values[i];
        sum += d * d;
    }
    return sum;
}

double drift_correction(double theta, const HurstParam& H, double T) {
    if (H.is_half_limit()) throw ArgumentError("drift correction requires H > 1/2");
    if (!(T > 0.0)) throw ArgumentError("horizon T must be positive");
    const double h = H.value();
    const double a = 2.0 * h - 1.0;

    if (theta > 0.0) {
        const double x = theta * T;
        const double first = T * std::pow(theta, -a) * boost::math::tgamma_lower(a, x);
        const double second = std::pow(theta, -a - 1.0) * boost::math::tgamma_lower(a + 1.0, x);
        return H.alpha() * (first - second);
    }

    // int_0^T (T-u) u^{a-1} e^{|theta| u} du = T^{a+1} sum_k (|theta| T)^k / k! / ((a+k)(a+k+1))
    const double z = -theta * T;
    if (z > 700.0) throw NumericalError("drift correction overflows for |theta| T > 700");
    double power = 1.0;  // z^k / k!
    double sum = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const double kk = static_cast<double>(k);
        const double term = power / ((a + kk) * (a + kk + 1.0));
        sum += term;
        if (kk > z && term < 1e-17 * sum) break;
        power *= z / (kk + 1.0);
    }
    return H.alpha() * std::pow(T, a + 1.0) * sum;
}

double skorohod_xi_integral(const SamplePath& x, const SamplePath& xi, double theta, const HurstParam& H) {
    const auto sym = symmetric_integral(x, xi);
    const double T = x.horizon();
    return sym.value - drift_correction(theta, H, T) - 0.5 * T;
}

}  // namespace mixou
