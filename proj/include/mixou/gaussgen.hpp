#pragma once

// Gaussian path generation: Brownian motion, fractional Brownian motion and
// the mixed process xi = W + B^H on uniform grids.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "mixou/rng.hpp"

namespace mixou {

/// Hurst index H in (1/2, 1) with the cached constant alpha_H = H(2H-1).
class HurstParam {
public:
    explicit HurstParam(double h);

    /// The H -> 1/2+ limit: H = 1/2 and alpha_H = 0 exactly. Only operations
    /// that stay meaningful in the limit (covariances, kernel solve) accept it.
    static HurstParam half_limit() noexcept;

    double value() const noexcept { return h_; }
    double alpha() const noexcept { return alpha_; }
    bool is_half_limit() const noexcept { return alpha_ == 0.0; }

private:
    HurstParam(double h, double alpha) noexcept : h_(h), alpha_(alpha) {}
    double h_;
    double alpha_;
};

/// Uniform grid t_i = i * delta, i = 0..n.
struct TimeGrid {
    std::size_t n = 0;
    double delta = 0.0;

    TimeGrid() = default;
    TimeGrid(std::size_t steps, double step);

    static TimeGrid over(double horizon, std::size_t steps) { return {steps, horizon / static_cast<double>(steps)}; }

    double horizon() const noexcept { return static_cast<double>(n) * delta; }
    double at(std::size_t i) const noexcept { return static_cast<double>(i) * delta; }
    std::size_t points() const noexcept { return n + 1; }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

enum class PathKind { BM, FBM, MFBM, MOU, MCIR, STATIONARY_MOU };

std::string_view to_string(PathKind kind) noexcept;

struct SamplePath {
    TimeGrid grid;
    std::vector<double> values;  // length grid.n + 1
    PathKind label = PathKind::BM;
    std::uint64_t seed = 0;

    double horizon() const noexcept { return grid.horizon(); }
    double back() const noexcept { return values.back(); }
};

enum class GenMethod { CHOLESKY, CIRCULANT };

struct GeneratorConfig {
    GenMethod method = GenMethod::CIRCULANT;
    std::size_t cholesky_cap = 4096;
};

GenMethod parse_method(std::string_view name);

/// R(s,t) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2.
double fbm_cov(double s, double t, const HurstParam& H);

/// min(s,t) + fbm_cov(s,t,H): covariance of xi = W + B^H.
double mfbm_cov(double s, double t, const HurstParam& H);

/// Autocovariance of fractional Gaussian noise with step delta at lag k.
double fgn_autocov(std::size_t lag, double delta, const HurstParam& H);

/// Exact fBm via Cholesky factor of the increment covariance. O(n^3); n <= cap.
SamplePath sample_fbm_cholesky(const TimeGrid& grid, const HurstParam& H, std::uint64_t seed,
                               std::size_t cap = 4096);

/// Exact fBm via circulant embedding of the fGn autocovariance (Davies-Harte / Wood-Chan).
SamplePath sample_fbm_circulant(std::size_t n, double delta, const HurstParam& H, std::uint64_t seed);

SamplePath sample_bm(const TimeGrid& grid, std::uint64_t seed);

struct MixedPaths {
    SamplePath w;
    SamplePath bh;
    SamplePath xi;
};

/// W and B^H from disjoint sub-streams of `seed`; xi = W + B^H pointwise.
MixedPaths sample_mixed(const TimeGrid& grid, const HurstParam& H, const GeneratorConfig& config,
                        std::uint64_t seed);

/// Square-root spectrum of the circulant embedding, prepared once per (n, delta, H)
/// and reused across replications.
class CirculantFgn {
public:
    CirculantFgn(std::size_t n, double delta, const HurstParam& H, int max_doublings = 4);

    std::size_t steps() const noexcept { return n_; }
    std::size_t embedding_size() const noexcept { return sqrt_eigen_.size(); }
    /// Smallest eigenvalue before clipping (diagnostic).
    double min_eigenvalue() const noexcept { return min_eigen_; }

    /// n fGn increments drawn from `rng`.
    std::vector<double> increments(StreamRng& rng) const;

private:
    std::size_t n_;
    std::vector<double> sqrt_eigen_;  // sqrt(lambda_k / M)
    double min_eigen_ = 0.0;
};

/// Prepared generator for xi on a fixed grid; the Monte Carlo runner builds one per cell.
class MixedGenerator {
public:
    MixedGenerator(const TimeGrid& grid, const HurstParam& H, const GeneratorConfig& config);

    const TimeGrid& grid() const noexcept { return grid_; }
    MixedPaths sample(std::uint64_t seed) const;
    /// Increments of xi only; avoids materializing W and B^H separately.
    std::vector<double> xi_increments(std::uint64_t seed) const;

private:
    std::vector<double> fgn_increments(std::uint64_t seed) const;

    TimeGrid grid_;
    HurstParam H_;
    GeneratorConfig config_;
    std::vector<double> cholesky_;  // lower-triangular factor, row-major, when method = CHOLESKY
    std::shared_ptr<const CirculantFgn> circulant_;
};

/// In-place complex DFT (forward, unnormalized) used by the embedding. Thread-safe.
void fft_forward(std::vector<std::complex<double>>& data);

}  // namespace mixou
