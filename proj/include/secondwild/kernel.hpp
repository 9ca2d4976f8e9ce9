#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "secondwild/series.hpp"

namespace secondwild {

enum class KernelKind { gaussian };

/// A symmetric kernel K: R -> [0, 1] with K(0) = 1, nonincreasing on [0, inf),
/// whose Fourier transform is nonnegative (so every Gram matrix is PSD).
struct KernelSpec {
    KernelKind kind = KernelKind::gaussian;

    [[nodiscard]] double operator()(double x) const;

    /// Smallest r >= 0 with K(x) < threshold for all |x| > r. Infinite when
    /// threshold <= 0.
    [[nodiscard]] double support_radius(double threshold) const;
};

[[nodiscard]] double kernel_eval(const KernelSpec& spec, double x);
[[nodiscard]] std::string kernel_name(KernelKind kind);
[[nodiscard]] KernelKind parse_kernel(const std::string& name);

/// Default cutoff below which kernel weights are dropped from lag-window sums.
inline constexpr double kKernelCutoff = 1e-12;

/// Largest integer offset h with K(h / bandwidth) >= cutoff, capped at n - 1.
[[nodiscard]] std::size_t kernel_window(const KernelSpec& spec, double bandwidth, std::size_t n,
                                        double cutoff = kKernelCutoff);

/// Symmetric Toeplitz Gram matrix {K((s - j) / k_T)}, stored by its first row.
struct KernelGram {
    std::vector<double> first_row;

    [[nodiscard]] std::size_t size() const noexcept { return first_row.size(); }
    [[nodiscard]] double operator()(std::size_t s, std::size_t j) const {
        return first_row[s > j ? s - j : j - s];
    }
    [[nodiscard]] Eigen::MatrixXd dense() const;
};

[[nodiscard]] KernelGram kernel_gram(const KernelSpec& spec, std::size_t T, double bandwidth);

struct FixedBandwidth {
    double k_T = 1.0;
};

/// Flat-top correlogram rule: q_hat is the smallest lag after which K_n
/// consecutive sample autocorrelations all fall below c sqrt(log10 T / T);
/// k_T = max(1, 2 q_hat).
struct AutoBandwidth {
    double c = 2.0;
};

using BandwidthRule = std::variant<FixedBandwidth, AutoBandwidth>;

struct BandwidthChoice {
    double k_T = 1.0;
    std::optional<std::size_t> q_hat;  ///< set by the automatic rule only
};

/// Minimum sample size accepted by the automatic rule.
inline constexpr std::size_t kAutoBandwidthMinT = 20;

[[nodiscard]] BandwidthChoice select_bandwidth(const TimeSeries& x, const BandwidthRule& rule);

[[nodiscard]] std::string describe(const BandwidthRule& rule);

}  // namespace secondwild
