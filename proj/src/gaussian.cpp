#include "secondwild/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "secondwild/errors.hpp"
#include "secondwild/quantile.hpp"

namespace secondwild {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t index) {
    return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                         0x5eC0u};
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
    auto seq = make_seed_seq(seed, index);
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), index_(stream_index), engine_(make_engine(seed, stream_index)) {}

void RngStream::fill_normal(std::span<double> out) {
    for (auto& v : out) v = normal_(engine_);
}

std::size_t RngStream::uniform_index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    // splitmix64 finalizer over seed ^ golden-ratio multiple of the tag
    std::uint64_t z = seed ^ (tag * 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

PsdFactor::PsdFactor(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(n == 0 ? 0 : std::min(bandwidth, n - 1)), data_(n * (bw_ + 1), 0.0) {}

double PsdFactor::operator()(std::size_t i, std::size_t j) const {
    if (j > i || i - j > bw_) return 0.0;
    return row(i)[bw_ - (i - j)];
}

Eigen::MatrixXd PsdFactor::dense() const {
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = first_col(i); j <= i; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j);
        }
    }
    return m;
}

void PsdFactor::multiply(std::span<const double> z, std::span<double> out) const {
    if (z.size() != n_ || out.size() != n_) throw DomainError("factor/vector size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = first_col(i);
        const double* r = row(i) + (bw_ - (i - j0));
        double s = 0.0;
        for (std::size_t j = j0; j <= i; ++j) s += r[j - j0] * z[j];
        out[i] = s;
    }
}

PsdFactor factorize_banded(const std::function<double(std::size_t, std::size_t)>& entry,
                           std::size_t n, std::size_t bandwidth, double scale) {
    PsdFactor f(n, bandwidth);
    if (n == 0 || scale == 0.0) return f;
    const std::size_t bw = f.bw_;
    double most_negative = 0.0;

    for (double rung : kJitterLadder) {
        const double jitter = rung * scale;
        std::fill(f.data_.begin(), f.data_.end(), 0.0);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            double* ri = f.row(i);
            const std::size_t i0 = f.first_col(i);
            for (std::size_t j = i0; j <= i; ++j) {
                const double* rj = f.row(j);
                const std::size_t j0 = f.first_col(j);
                const std::size_t k0 = std::max(i0, j0);
                double s = entry(i, j);
                // L(i,k) sits at ri[bw - (i - k)], L(j,k) at rj[bw - (j - k)]
                const double* li = ri + (bw - (i - k0));
                const double* lj = rj + (bw - (j - k0));
                for (std::size_t k = 0; k < j - k0; ++k) s -= li[k] * lj[k];
                if (j == i) {
                    const double pivot = s + jitter;
                    if (!(pivot > 0.0)) {
                        most_negative = std::min(most_negative, pivot);
                        ok = false;
                        break;
                    }
                    ri[bw] = std::sqrt(pivot);
                } else {
                    ri[bw - (i - j)] = s / rj[bw];
                }
            }
        }
        if (ok) {
            f.jitter_ = jitter;
            return f;
        }
    }
    throw NotPsdError("matrix is not positive semi-definite within jitter 1e-6 (pivot " +
                          std::to_string(most_negative) + ")",
                      most_negative);
}

PsdFactor factorize_psd(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw DomainError("factorize_psd needs a square matrix");
    const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
    if (!std::isfinite(scale)) throw NumericalError("matrix has non-finite entries");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale)) {
        throw DomainError("factorize_psd needs a symmetric matrix");
    }
    const auto n = static_cast<std::size_t>(m.rows());
    return factorize_banded(
        [&m](std::size_t i, std::size_t j) {
            return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        },
        n, n == 0 ? 0 : n - 1, scale);
}

Eigen::MatrixXd clip_to_psd(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
}

PsdFactor factorize_kernel_gram(const KernelSpec& spec, std::size_t T, double bandwidth,
                                double cutoff) {
    const auto gram = kernel_gram(spec, T, bandwidth);
    const std::size_t window = kernel_window(spec, bandwidth, T, cutoff);
    return factorize_banded(
        [&gram](std::size_t i, std::size_t j) { return gram.first_row[i - j]; }, T, window, 1.0);
}

std::shared_ptr<const PsdFactor> GramFactorCache::get(const KernelSpec& spec, std::size_t T,
                                                      double bandwidth, double cutoff) {
    const Key key{static_cast<int>(spec.kind), T, bandwidth, cutoff};
    {
        std::lock_guard lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    auto factor =
        std::make_shared<const PsdFactor>(factorize_kernel_gram(spec, T, bandwidth, cutoff));
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    if (entries_.size() >= capacity_) entries_.clear();
    entries_.emplace(key, factor);
    return factor;
}

void sample_correlated_normals(const PsdFactor& factor, RngStream& stream, std::span<double> out,
                               std::span<double> scratch) {
    stream.fill_normal(scratch);
    factor.multiply(scratch, out);
}

std::vector<double> sample_correlated_normals(const PsdFactor& factor, RngStream& stream) {
    std::vector<double> z(factor.size());
    std::vector<double> out(factor.size());
    sample_correlated_normals(factor, stream, out, z);
    return out;
}

std::vector<double> gaussian_max_draws(const Eigen::MatrixXd& cov, std::size_t n_mc,
                                       RngStream& stream) {
    PsdFactor factor;
    try {
        factor = factorize_psd(cov);
    } catch (const NotPsdError&) {
        factor = factorize_psd(clip_to_psd(cov));
    }
    const std::size_t m = factor.size();
    std::vector<double> z(m), xi(m), maxima(n_mc);
    for (auto& v : maxima) {
        sample_correlated_normals(factor, stream, xi, z);
        double best = 0.0;
        for (double e : xi) best = std::max(best, std::abs(e));
        v = best;
    }
    std::sort(maxima.begin(), maxima.end());
    return maxima;
}

double gaussian_max_quantile(const Eigen::MatrixXd& cov, double alpha, std::size_t n_mc,
                             RngStream& stream) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (n_mc < 1000) throw DomainError("the Gaussian-max quantile needs at least 1000 Monte Carlo draws");
    const auto maxima = gaussian_max_draws(cov, n_mc, stream);
    return sorted_sample_quantile(maxima, 1.0 - alpha);
}

double gaussian_max_quantile(const LongRunCov& cov, double alpha, std::size_t n_mc,
                             RngStream& stream) {
    return gaussian_max_quantile(cov.matrix, alpha, n_mc, stream);
}

}  // namespace secondwild
