#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "secondwild/hac.hpp"
#include "secondwild/kernel.hpp"

namespace secondwild {

/**
 * @brief Reproducible random stream identified by (seed, stream_index).
 *
 * Both words go through std::seed_seq, so distinct stream indices give
 * unrelated engine states. A stream is a value: copy it to fork, never share
 * one instance between threads.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_index() const noexcept { return index_; }

    double normal() { return normal_(engine_); }
    void fill_normal(std::span<double> out);
    /// Uniform integer in [0, n).
    std::size_t uniform_index(std::size_t n);

private:
    std::uint64_t seed_;
    std::uint64_t index_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

/// Mix a purpose tag into a seed so that independent consumers of the same
/// user seed never share streams.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// Lower-triangular factor with LL^T ~ M, in band storage: row i keeps
/// L(i, i-bandwidth .. i). A dense factor has bandwidth n - 1.
class PsdFactor {
public:
    PsdFactor() = default;
    PsdFactor(std::size_t n, std::size_t bandwidth);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t bandwidth() const noexcept { return bw_; }
    [[nodiscard]] double jitter_used() const noexcept { return jitter_; }

    /// L(i, j); zero above the diagonal and outside the band.
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const;
    [[nodiscard]] Eigen::MatrixXd dense() const;

    /// out = L z.
    void multiply(std::span<const double> z, std::span<double> out) const;

private:
    friend PsdFactor factorize_banded(const std::function<double(std::size_t, std::size_t)>&,
                                      std::size_t, std::size_t, double);
    [[nodiscard]] double* row(std::size_t i) { return data_.data() + i * (bw_ + 1); }
    [[nodiscard]] const double* row(std::size_t i) const { return data_.data() + i * (bw_ + 1); }
    [[nodiscard]] std::size_t first_col(std::size_t i) const { return i > bw_ ? i - bw_ : 0; }

    std::size_t n_ = 0;
    std::size_t bw_ = 0;
    double jitter_ = 0.0;
    std::vector<double> data_;
};

/// Jitter ladder relative to max|M|; the first entry is an exact attempt.
inline constexpr double kJitterLadder[] = {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6};

/// Banded Cholesky of the symmetric matrix with entries `entry(i, j)` (i >= j,
/// i - j <= bandwidth) with escalating diagonal jitter. `scale` is max|M|.
/// Throws NotPsdError carrying the most negative pivot when every rung fails.
[[nodiscard]] PsdFactor factorize_banded(const std::function<double(std::size_t, std::size_t)>& entry,
                                         std::size_t n, std::size_t bandwidth, double scale);

/// Dense Cholesky-with-jitter of a symmetric matrix.
[[nodiscard]] PsdFactor factorize_psd(const Eigen::MatrixXd& m);

/// Symmetric eigendecomposition with negative eigenvalues set to zero.
[[nodiscard]] Eigen::MatrixXd clip_to_psd(const Eigen::MatrixXd& m);

/// Factor of the kernel Gram matrix {K((s - j) / k_T)} with entries below
/// `cutoff` dropped, which makes it banded.
[[nodiscard]] PsdFactor factorize_kernel_gram(const KernelSpec& spec, std::size_t T, double bandwidth,
                                              double cutoff = kKernelCutoff);

/// Memoizes Gram factors by (kernel, T, k_T, cutoff). Thread-safe.
class GramFactorCache {
public:
    explicit GramFactorCache(std::size_t capacity = 128) : capacity_(capacity) {}

    [[nodiscard]] std::shared_ptr<const PsdFactor> get(const KernelSpec& spec, std::size_t T,
                                                       double bandwidth,
                                                       double cutoff = kKernelCutoff);

private:
    using Key = std::tuple<int, std::size_t, double, double>;
    std::size_t capacity_;
    std::mutex mutex_;
    std::map<Key, std::shared_ptr<const PsdFactor>> entries_;
};

/// L z with z i.i.d. standard normal drawn from `stream`.
[[nodiscard]] std::vector<double> sample_correlated_normals(const PsdFactor& factor, RngStream& stream);
void sample_correlated_normals(const PsdFactor& factor, RngStream& stream, std::span<double> out,
                               std::span<double> scratch);

/// n_mc draws of max_j |xi_j| with xi ~ N(0, cov), sorted ascending.
[[nodiscard]] std::vector<double> gaussian_max_draws(const Eigen::MatrixXd& cov, std::size_t n_mc,
                                                     RngStream& stream);

/// Monte Carlo 1 - alpha quantile of max_j |xi_j|, xi ~ N(0, cov); n_mc >= 1000.
[[nodiscard]] double gaussian_max_quantile(const LongRunCov& cov, double alpha, std::size_t n_mc,
                                           RngStream& stream);
[[nodiscard]] double gaussian_max_quantile(const Eigen::MatrixXd& cov, double alpha, std::size_t n_mc,
                                           RngStream& stream);

}  // namespace secondwild
