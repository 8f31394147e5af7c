#include "mixou/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixou/errors.hpp"

namespace mixou {

namespace {

// int_{c0}^{c1} |r - s|^{a-1} dr, a = 2H - 1 in (0, 1)
double cell_moment(double c0, double c1, double s, double a) {
    auto F = [a](double x) { return std::copysign(std::pow(std::abs(x), a), x) / a; };
    return F(c1 - s) - F(c0 - s);
}

// int_{c0}^{c1} int_{y0}^{y1} |r - tau|^{a-1} dtau dr
double double_moment(double c0, double c1, double y0, double y1, double a) {
    auto F = [a](double x) { return std::pow(std::abs(x), a + 1.0) / (a * (a + 1.0)); };
    return -(F(c1 - y1) - F(c1 - y0) - F(c0 - y1) + F(c0 - y0));
}

// Edges of [0, t] graded toward both ends with exponent q.
Eigen::VectorXd graded_edges(double t, std::size_t cells, double q) {
    Eigen::VectorXd e(static_cast<Eigen::Index>(cells + 1));
    for (std::size_t i = 0; i <= cells; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(cells);
        const double phi = u <= 0.5 ? 0.5 * std::pow(2.0 * u, q) : 1.0 - 0.5 * std::pow(2.0 - 2.0 * u, q);
        e(static_cast<Eigen::Index>(i)) = t * phi;
    }
    e(0) = 0.0;
    e(static_cast<Eigen::Index>(cells)) = t;
    return e;
}

}  // namespace

double KernelSolution::g(double s, std::size_t j) const {
    if (j == 0 || H.is_half_limit()) return 1.0;
    const auto& e = edges[j];
    const auto& v = cells[j];
    const double a = 2.0 * H.value() - 1.0;
    double acc = 0.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) acc += v(k) * cell_moment(e(k), e(k + 1), s, a);
    return 1.0 - H.alpha() * acc;
}

double KernelSolution::integral(double y0, double y1, std::size_t j) const {
    if (j == 0 || H.is_half_limit()) return y1 - y0;
    const auto& e = edges[j];
    const auto& v = cells[j];
    const double a = 2.0 * H.value() - 1.0;
    double acc = 0.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) acc += v(k) * double_moment(e(k), e(k + 1), y0, y1, a);
    return (y1 - y0) - H.alpha() * acc;
}

KernelSolution solve_g(double T, const HurstParam& H, std::size_t m, std::size_t cells_per_node) {
    if (!(T > 0.0)) throw ArgumentError("kernel horizon must be positive");
    if (m < 8) throw ArgumentError("kernel grid needs m >= 8");

    KernelSolution sol;
    sol.T = T;
    sol.m = m;
    sol.H = H;
    const std::size_t cells = cells_per_node == 0 ? m : cells_per_node;
    const double alpha = H.alpha();
    const double a = 2.0 * H.value() - 1.0;
    // boundary layers behave like |x|^{2H-1}; grading exponent 1/(2H-1) equidistributes them
    const double q = H.is_half_limit() ? 1.0 : std::clamp(1.0 / a, 1.0, 6.0);

    sol.edges.assign(m + 1, Eigen::VectorXd());
    sol.cells.assign(m + 1, Eigen::VectorXd());
    sol.gdiag = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m + 1));
    sol.qvM = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m + 1));

    const auto nc = static_cast<Eigen::Index>(cells);
    for (std::size_t j = 1; j <= m; ++j) {
        const double t = sol.node(j);
        Eigen::VectorXd e = graded_edges(t, cells, q);
        Eigen::VectorXd g = Eigen::VectorXd::Ones(nc);
        if (alpha != 0.0) {
            Eigen::MatrixXd A = Eigen::MatrixXd::Identity(nc, nc);
            for (Eigen::Index i = 0; i < nc; ++i) {
                const double mid = 0.5 * (e(i) + e(i + 1));
                for (Eigen::Index k = 0; k < nc; ++k) A(i, k) += alpha * cell_moment(e(k), e(k + 1), mid, a);
            }
            const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(nc);
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
            if (!(lu.rcond() > 1e-14)) throw NumericalError("kernel system singular at t_" + std::to_string(j));
            g = lu.solve(rhs);
            sol.residual = std::max(sol.residual, (A * g - rhs).cwiseAbs().maxCoeff());
        }
        sol.edges[j] = std::move(e);
        sol.cells[j] = std::move(g);
        sol.gdiag(static_cast<Eigen::Index>(j)) = sol.g(t, j);
        sol.qvM(static_cast<Eigen::Index>(j)) = sol.integral(0.0, t, j);
    }

    sol.gmat.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m + 1));
    for (std::size_t j = 0; j <= m; ++j)
        for (std::size_t i = 0; i < m; ++i)
            sol.gmat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sol.g(sol.midpoint(i), j);
    return sol;
}

QvMDiagnostics qv_M(const KernelSolution& sol) {
    QvMDiagnostics out;
    out.from_g = sol.qvM;
    const auto n = static_cast<Eigen::Index>(sol.m + 1);
    out.from_diag = Eigen::VectorXd::Zero(n);
    const double h = sol.step();
    for (Eigen::Index j = 1; j < n; ++j) {
        const double a = sol.gdiag(j - 1), b = sol.gdiag(j);
        out.from_diag(j) = out.from_diag(j - 1) + 0.5 * h * (a * a + b * b);
    }
    out.max_discrepancy = (out.from_g - out.from_diag).cwiseAbs().maxCoeff();
    return out;
}

void compute_calG(KernelSolution& sol) {
    const auto m = static_cast<Eigen::Index>(sol.m);
    const double h = sol.step();
    if (sol.gdiag.minCoeff() <= 1e-12) throw NumericalError("g(t,t) vanishes; R is undefined");

    // Evaluated into the value type: f may return temporaries an expression template would outlive.
    auto ds = [m, h](Eigen::Index j, auto&& f) {
        using V = decltype(f(0));
        if (j == 0) return V((f(1) - f(0)) / h);
        if (j == m) return V((f(m) - f(m - 1)) / h);
        return V((f(j + 1) - f(j - 1)) / (2.0 * h));
    };

    sol.Rmat.resize(m, m + 1);
    for (Eigen::Index j = 0; j <= m; ++j) {
        const auto gdot = ds(j, [&sol](Eigen::Index c) { return Eigen::VectorXd(sol.gmat.col(c)); });
        sol.Rmat.col(j) = gdot / sol.gdiag(j);
    }

    // Psi(j, k) = int_0^{t_k} g(tau, t_j) dtau
    Eigen::MatrixXd psi(m + 1, m + 1);
    for (Eigen::Index j = 0; j <= m; ++j)
        for (Eigen::Index k = 0; k <= m; ++k)
            psi(j, k) = sol.integral(0.0, sol.node(static_cast<std::size_t>(k)), static_cast<std::size_t>(j));

    sol.Gmat = Eigen::MatrixXd::Zero(m + 1, m + 1);
    sol.calG = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (Eigen::Index j = 0; j <= m; ++j) {
        const double diag = sol.gdiag(j);
        for (Eigen::Index k = j; k <= m; ++k) {
            const double int_gdot = ds(j, [&psi, k](Eigen::Index c) { return psi(c, k); });
            sol.Gmat(j, k) = 1.0 - int_gdot / (diag * diag);
            sol.calG(j, k) = diag * sol.Gmat(j, k);
        }
    }
}

double kernel_target_cov(double s, double t, const HurstParam& H) {
    if (H.is_half_limit()) return std::min(s, t);
    return mfbm_cov(s, t, H);
}

double check_property_G(const KernelSolution& sol) {
    if (!sol.has_calG()) throw ArgumentError("property-G check needs compute_calG first");
    const auto m = static_cast<Eigen::Index>(sol.m);
    const double h = sol.step();
    double worst = 0.0;
    for (Eigen::Index a = 1; a <= m; ++a) {
        for (Eigen::Index b = a; b <= m; ++b) {
            // trapezoid over nodes u = t_0..t_a of calG(u, t_a) calG(u, t_b)
            double acc = 0.5 * (sol.calG(0, a) * sol.calG(0, b) + sol.calG(a, a) * sol.calG(a, b));
            for (Eigen::Index u = 1; u < a; ++u) acc += sol.calG(u, a) * sol.calG(u, b);
            const double lhs = h * acc;
            const double target =
                kernel_target_cov(sol.node(static_cast<std::size_t>(a)), sol.node(static_cast<std::size_t>(b)), sol.H);
            worst = std::max(worst, std::abs(lhs - target));
        }
    }
    return worst;
}

}  // namespace mixou
