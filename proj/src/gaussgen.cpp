#include "mixou/gaussgen.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "mixou/errors.hpp"

namespace mixou {

HurstParam::HurstParam(double h) : h_(h), alpha_(h * (2.0 * h - 1.0)) {
    if (!(h > 0.5 && h < 1.0))
        throw ArgumentError("Hurst index must lie in (1/2, 1), got " + std::to_string(h));
}

HurstParam HurstParam::half_limit() noexcept { return HurstParam(0.5, 0.0); }

TimeGrid::TimeGrid(std::size_t steps, double step) : n(steps), delta(step) {
    if (steps == 0) throw ArgumentError("grid needs at least one step");
    if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("grid step must be positive");
}

std::string_view to_string(PathKind kind) noexcept {
    switch (kind) {
        case PathKind::BM: return "BM";
        case PathKind::FBM: return "FBM";
        case PathKind::MFBM: return "MFBM";
        case PathKind::MOU: return "MOU";
        case PathKind::MCIR: return "MCIR";
        case PathKind::STATIONARY_MOU: return "STATIONARY_MOU";
    }
    return "UNKNOWN";
}

GenMethod parse_method(std::string_view name) {
    if (name == "cholesky") return GenMethod::CHOLESKY;
    if (name == "circulant") return GenMethod::CIRCULANT;
    throw ArgumentError("unknown generator method '" + std::string(name) + "'");
}

double fbm_cov(double s, double t, const HurstParam& H) {
    if (s < 0.0 || t < 0.0) throw ArgumentError("covariance needs non-negative times");
    const double two_h = 2.0 * H.value();
    return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(t - s), two_h));
}

double mfbm_cov(double s, double t, const HurstParam& H) { return std::min(s, t) + fbm_cov(s, t, H); }

double fgn_autocov(std::size_t lag, double delta, const HurstParam& H) {
    if (H.is_half_limit()) return lag == 0 ? delta : 0.0;
    const double two_h = 2.0 * H.value();
    const double k = static_cast<double>(lag);
    const double lower = lag == 0 ? 1.0 : std::pow(k - 1.0, two_h);
    const double unit = 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + lower);
    return std::pow(delta, two_h) * unit;
}

// ---------------------------------------------------------------------------
// FFT

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan forward_plan(std::size_t size) {
    static std::map<std::size_t, fftw_plan> plans;
    std::lock_guard lock(plan_mutex());
    if (auto it = plans.find(size); it != plans.end()) return it->second;
    auto* scratch = fftw_alloc_complex(size);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(size), scratch, scratch, FFTW_FORWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw NumericalError("FFTW could not plan a transform of size " + std::to_string(size));
    plans.emplace(size, plan);
    return plan;
}

std::vector<double> cumulative(const std::vector<double>& increments, double start = 0.0) {
    std::vector<double> path(increments.size() + 1);
    path[0] = start;
    for (std::size_t i = 0; i < increments.size(); ++i) path[i + 1] = path[i] + increments[i];
    return path;
}

std::vector<double> toeplitz_cholesky(std::size_t n, double delta, const HurstParam& H) {
    std::vector<double> gamma(n);
    for (std::size_t k = 0; k < n; ++k) gamma[k] = fgn_autocov(k, delta, H);

    std::vector<double> L(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = gamma[0];
        for (std::size_t k = 0; k < j; ++k) diag -= L[j * n + k] * L[j * n + k];
        if (!(diag > 0.0)) throw CholeskyError(j);
        const double pivot = std::sqrt(diag);
        L[j * n + j] = pivot;
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = gamma[i - j];
            const double* ri = &L[i * n];
            const double* rj = &L[j * n];
            for (std::size_t k = 0; k < j; ++k) acc -= ri[k] * rj[k];
            L[i * n + j] = acc / pivot;
        }
    }
    return L;
}

std::vector<double> apply_lower(const std::vector<double>& L, std::size_t n, StreamRng& rng) {
    std::vector<double> z(n);
    for (auto& v : z) v = rng.normal();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        const double* row = &L[i * n];
        for (std::size_t k = 0; k <= i; ++k) acc += row[k] * z[k];
        out[i] = acc;
    }
    return out;
}

std::vector<double> brownian_increments(std::size_t n, double delta, StreamRng& rng) {
    std::vector<double> dw(n);
    const double scale = std::sqrt(delta);
    for (auto& v : dw) v = scale * rng.normal();
    return dw;
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) {
    if (data.empty()) return;
    const fftw_plan plan = forward_plan(data.size());
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

// ---------------------------------------------------------------------------
// Circulant embedding

CirculantFgn::CirculantFgn(std::size_t n, double delta, const HurstParam& H, int max_doublings) : n_(n) {
    if (n < 2) throw ArgumentError("circulant embedding needs n >= 2");
    if (!(delta > 0.0)) throw ArgumentError("grid step must be positive");

    std::size_t half = 1;
    while (half < n) half <<= 1;  // M = 2 * half is the first power of two >= 2n

    constexpr double kClip = -1e-10;
    for (int attempt = 0; attempt <= max_doublings; ++attempt, half <<= 1) {
        const std::size_t m = 2 * half;
        std::vector<std::complex<double>> row(m);
        for (std::size_t k = 0; k <= half; ++k) row[k] = fgn_autocov(k, delta, H);
        for (std::size_t k = half + 1; k < m; ++k) row[k] = row[m - k];
        fft_forward(row);

        double min_eigen = row[0].real();
        for (const auto& v : row) min_eigen = std::min(min_eigen, v.real());
        if (min_eigen < kClip * std::abs(row[0].real())) continue;

        min_eigen_ = min_eigen;
        sqrt_eigen_.resize(m);
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t k = 0; k < m; ++k) sqrt_eigen_[k] = std::sqrt(std::max(row[k].real(), 0.0) * inv_m);
        return;
    }
    throw NumericalError("circulant embedding has negative eigenvalues after " +
                         std::to_string(max_doublings) + " doublings");
}

std::vector<double> CirculantFgn::increments(StreamRng& rng) const {
    const std::size_t m = sqrt_eigen_.size();
    std::vector<std::complex<double>> w(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        w[k] = sqrt_eigen_[k] * std::complex<double>(re, im);
    }
    fft_forward(w);
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = w[i].real();
    return out;
}

// ---------------------------------------------------------------------------
// Path samplers

SamplePath sample_fbm_cholesky(const TimeGrid& grid, const HurstParam& H, std::uint64_t seed, std::size_t cap) {
    if (grid.n > cap)
        throw ArgumentError("Cholesky generator limited to n <= " + std::to_string(cap) + " steps");
    const auto L = toeplitz_cholesky(grid.n, grid.delta, H);
    StreamRng rng(seed, Substream::Fractional);
    return {grid, cumulative(apply_lower(L, grid.n, rng)), PathKind::FBM, seed};
}

SamplePath sample_fbm_circulant(std::size_t n, double delta, const HurstParam& H, std::uint64_t seed) {
    const CirculantFgn embedding(n, delta, H);
    StreamRng rng(seed, Substream::Fractional);
    return {TimeGrid(n, delta), cumulative(embedding.increments(rng)), PathKind::FBM, seed};
}

SamplePath sample_bm(const TimeGrid& grid, std::uint64_t seed) {
    StreamRng rng(seed, Substream::Brownian);
    return {grid, cumulative(brownian_increments(grid.n, grid.delta, rng)), PathKind::BM, seed};
}

MixedGenerator::MixedGenerator(const TimeGrid& grid, const HurstParam& H, const GeneratorConfig& config)
    : grid_(grid), H_(H), config_(config) {
    if (config.method == GenMethod::CHOLESKY) {
        if (grid.n > config.cholesky_cap)
            throw ArgumentError("Cholesky generator limited to n <= " + std::to_string(config.cholesky_cap) +
                                " steps");
        cholesky_ = toeplitz_cholesky(grid.n, grid.delta, H);
    } else if (grid.n >= 2) {
        circulant_ = std::make_shared<const CirculantFgn>(grid.n, grid.delta, H);
    } else {
        // a single increment needs no embedding
        cholesky_ = {std::sqrt(fgn_autocov(0, grid.delta, H))};
    }
}

std::vector<double> MixedGenerator::fgn_increments(std::uint64_t seed) const {
    StreamRng rng(seed, Substream::Fractional);
    if (circulant_) return circulant_->increments(rng);
    return apply_lower(cholesky_, grid_.n, rng);
}

MixedPaths MixedGenerator::sample(std::uint64_t seed) const {
    StreamRng brown(seed, Substream::Brownian);
    const auto dw = brownian_increments(grid_.n, grid_.delta, brown);
    const auto dbh = fgn_increments(seed);

    MixedPaths out{{grid_, cumulative(dw), PathKind::BM, seed},
                   {grid_, cumulative(dbh), PathKind::FBM, seed},
                   {grid_, {}, PathKind::MFBM, seed}};
    out.xi.values.resize(grid_.points());
    for (std::size_t i = 0; i < grid_.points(); ++i) out.xi.values[i] = out.w.values[i] + out.bh.values[i];
    return out;
}

std::vector<double> MixedGenerator::xi_increments(std::uint64_t seed) const {
    StreamRng brown(seed, Substream::Brownian);
    auto dxi = brownian_increments(grid_.n, grid_.delta, brown);
    const auto dbh = fgn_increments(seed);
    for (std::size_t i = 0; i < dxi.size(); ++i) dxi[i] += dbh[i];
    return dxi;
}

MixedPaths sample_mixed(const TimeGrid& grid, const HurstParam& H, const GeneratorConfig& config,
                        std::uint64_t seed) {
    return MixedGenerator(grid, H, config).sample(seed);
}

}  // namespace mixou
