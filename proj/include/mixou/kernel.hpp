#pragma once

// Kernel of the fundamental martingale of xi = W + B^H.
//
// For every t, g(., t) solves the weakly singular second-kind equation
//
//   g(s,t) + alpha_H int_0^t g(r,t) |r-s|^{2H-2} dr = 1,
//
// and the same identity extends g(., t) to s outside [0, t]. For each node
// t_j = j T/m the solve uses piecewise-constant g on a mesh of [0, t_j] graded
// toward both ends (g has |.|^{2H-1} boundary layers there), collocation at cell
// midpoints and product-integration weights (exact cell moments of
// |r-s|^{2H-2}). Everything downstream evaluates the Nystrom interpolant
//   g(s, t_j) = 1 - alpha_H sum_k g_k int_{cell k} |r-s|^{2H-2} dr
// which is defined for every s, so R, G and calG never need the raw cells.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "mixou/gaussgen.hpp"

namespace mixou {

struct KernelSolution {
    double T = 0.0;
    std::size_t m = 0;
    HurstParam H = HurstParam::half_limit();

    /// Per node t_j: cell edges of the graded mesh on [0, t_j] and the solved cell values.
    std::vector<Eigen::VectorXd> edges;
    std::vector<Eigen::VectorXd> cells;

    /// gmat(i, j) = g(s_i, t_j), s_i = (i + 1/2) h (i < m), t_j = j h (j <= m).
    /// Rows with s_i < t_j lie in the solved triangle; the others are the extension.
    Eigen::MatrixXd gmat;
    /// gdiag(j) = g(t_j, t_j).
    Eigen::VectorXd gdiag;
    /// <M>(t_j) = int_0^{t_j} g(s, t_j) ds.
    Eigen::VectorXd qvM;
    /// Max collocation residual of the discrete equations over all t_j.
    double residual = 0.0;

    /// Rmat(i, j) = R(s_i, t_j) = d/dt g(s_i, t)|_{t_j} / g(t_j, t_j).  Filled by compute_calG.
    Eigen::MatrixXd Rmat;
    /// Gmat(j, k) = G(t_j, t_k), calG(j, k) = g(t_j, t_j) G(t_j, t_k), k >= j.  Filled by compute_calG.
    Eigen::MatrixXd Gmat;
    Eigen::MatrixXd calG;

    double step() const noexcept { return T / static_cast<double>(m); }
    double node(std::size_t j) const noexcept { return static_cast<double>(j) * step(); }
    double midpoint(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * step(); }
    bool has_calG() const noexcept { return calG.size() > 0; }

    /// Nystrom interpolant g(s, t_j) for any s >= 0.
    double g(double s, std::size_t j) const;
    /// int_{y0}^{y1} g(tau, t_j) dtau of the interpolant, in closed form.
    double integral(double y0, double y1, std::size_t j) const;
};

/// Solve for all t_j. `cells_per_node` sizes each graded mesh (0 = m).
/// Accepts HurstParam::half_limit() (alpha_H = 0, g = 1).
KernelSolution solve_g(double T, const HurstParam& H, std::size_t m, std::size_t cells_per_node = 0);

struct QvMDiagnostics {
    Eigen::VectorXd from_g;        // int_0^t g(s, t) ds
    Eigen::VectorXd from_diag;     // int_0^t g(s, s)^2 ds (trapezoid over nodes)
    double max_discrepancy = 0.0;  // max_j |from_g - from_diag|
};

QvMDiagnostics qv_M(const KernelSolution& sol);

/// Fills Rmat, Gmat and calG:
///   R(tau, s) = gdot(tau, s) / g(s, s),   gdot = d/ds g(tau, s),
///   G(s, t)   = 1 - (1/g(s,s)) int_0^t R(tau, s) dtau,
///   calG(s,t) = g(s, s) G(s, t).
/// The tau-integral of gdot is taken as d/ds int_0^t g(tau, s) dtau (central
/// differences over the s-nodes, one-sided at the ends) with the inner integral exact.
void compute_calG(KernelSolution& sol);

/// Covariance the kernel reproduces: mfbm_cov(s, t, H), or min(s, t) when alpha_H = 0.
double kernel_target_cov(double s, double t, const HurstParam& H);

/// max over node pairs (s, t) of | int_0^{min(s,t)} calG(u, s) calG(u, t) du - target(s, t) |.
double check_property_G(const KernelSolution& sol);

}  // namespace mixou
