#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "secondwild/bootstrap.hpp"
#include "secondwild/gaussian.hpp"
#include "secondwild/series.hpp"

namespace secondwild {

/// AR-sieve comparator: residual resampling through a fitted AR(p_hat).
struct SieveConfig {
    std::size_t p_max = 7;  ///< AIC search range 0..p_max
    std::size_t B = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    std::size_t burn_in = 1000;
    std::size_t threads = 1;

    void validate() const;
};

/// Roots of 1 - sum a_j z^j must lie outside |z| <= 1 + kSieveRootMargin.
inline constexpr double kSieveRootMargin = 1e-6;
inline constexpr double kSieveShrinkFactor = 0.99;
inline constexpr std::size_t kSieveMaxShrinks = 50;

struct SieveModel {
    std::size_t order = 0;
    std::vector<double> coefficients;  ///< a_1..a_order
    std::vector<double> residuals;     ///< centered in-sample residuals
    std::size_t shrink_steps = 0;
};

/// Largest modulus of the companion-matrix eigenvalues (inverse of the
/// smallest root modulus). 0 for an empty polynomial.
[[nodiscard]] double companion_spectral_radius(std::span<const double> a);

/// Shrinks a_j by kSieveShrinkFactor^j until stable. Returns the number of
/// steps; throws NumericalError after kSieveMaxShrinks.
std::size_t stabilize_ar(std::vector<double>& a);

/// AIC order, Yule-Walker coefficients, centered residuals
/// e_t = X_t - sum_j a_j X_{t-j} for t = order+1..T.
[[nodiscard]] SieveModel fit_sieve_model(const TimeSeries& x, std::size_t p_max);

/// X*_t = sum_j a_j X*_{t-j} + e*_t from zero start, e*_t drawn with
/// replacement from the model residuals. Returns the last T of T + burn_in.
[[nodiscard]] std::vector<double> sieve_regenerate(const SieveModel& model, std::size_t T,
                                                   std::size_t burn_in, RngStream& stream);

/// Same second-order statistics as the wild path, computed on a regenerated
/// series. A zero regenerated series (sigma*_0 = 0) is flagged degenerate
/// with rho* = 0 and a* = 0.
[[nodiscard]] Replicate sieve_replicate(const SecondOrderEstimates& est, const SieveModel& model,
                                        std::size_t burn_in, RngStream& stream);

/// Stream of sieve replicate b (1-based).
[[nodiscard]] RngStream sieve_stream(std::uint64_t seed, std::size_t b);

[[nodiscard]] std::pair<InferenceReport, BootstrapDraws> ar_sieve_bootstrap(
    const TimeSeries& x, std::size_t d, std::size_t p, const LagSet& H, const LagSet& I,
    const SieveConfig& cfg);

}  // namespace secondwild
