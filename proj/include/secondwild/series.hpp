#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace secondwild {

/// Set of lags, kept sorted and duplicate-free.
using LagSet = std::vector<std::size_t>;

/// Build the lag set {first, first+1, ..., last}.
[[nodiscard]] LagSet lag_range(std::size_t first, std::size_t last);

/// Parse comma-separated lags and inclusive ranges, e.g. "0-3,5" -> {0,1,2,3,5}.
/// Throws DomainError on malformed input.
[[nodiscard]] LagSet parse_lag_set(const std::string& text);

[[nodiscard]] std::string format_lag_set(const LagSet& lags);

/**
 * @brief An observed sample X_1..X_T.
 *
 * Values are stored zero-based (values()[0] is X_1). The estimators assume a
 * zero-mean process; `centered()` records whether the sample mean was
 * subtracted on construction.
 */
class TimeSeries {
public:
    /// Throws DomainError if fewer than two values or any value is non-finite.
    explicit TimeSeries(std::vector<double> values, bool center = false);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool centered() const noexcept { return centered_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
    bool centered_;
};

/// sigma_hat_j = (1/T) sum_{i=j+1}^T X_i X_{i-j}. Divisor is T for every lag.
[[nodiscard]] double sample_autocov(std::span<const double> x, std::size_t lag);
[[nodiscard]] double sample_autocov(const TimeSeries& x, std::size_t lag);

/// sigma_hat_0..sigma_hat_max_lag.
[[nodiscard]] std::vector<double> sample_autocovs(std::span<const double> x, std::size_t max_lag);

/// rho_hat_j = sigma_hat_j / sigma_hat_0. Throws DegenerateVarianceError if sigma_hat_0 == 0.
[[nodiscard]] double sample_autocorr(const TimeSeries& x, std::size_t lag);

/// Point estimates of every target of the second-order inference.
struct SecondOrderEstimates {
    std::size_t T = 0;
    std::size_t d = 0;
    std::size_t p = 0;
    std::vector<double> sigma;  ///< lags 0..d
    std::vector<double> rho;    ///< lags 0..d, rho[0] == 1
    std::vector<double> a;      ///< a[k-1] is the order-p AR coefficient at lag k
    LagSet H;                   ///< autocovariance targets, subset of {0..d}
    LagSet I;                   ///< autocorrelation targets, subset of {1..d}
    bool ar_pseudo_inverse = false;
};

/// Compute sigma_hat_0..d, rho_hat_1..d and the order-p Yule-Walker fit.
/// p == 0 disables the AR family. Validates 0 <= p <= d < T, H within {0..d},
/// I within {1..d}, and sigma_hat_0 > 0.
[[nodiscard]] SecondOrderEstimates estimate_second_order(const TimeSeries& x, std::size_t d,
                                                         std::size_t p, LagSet H, LagSet I);

}  // namespace secondwild
