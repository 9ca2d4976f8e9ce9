#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "secondwild/kernel.hpp"
#include "secondwild/series.hpp"

namespace secondwild {

/// Targets x T, row-major so each residual row is contiguous.
using ResidualRows = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class HacTarget { autocovariance, autocorrelation, ar_coefficients };

[[nodiscard]] std::string target_name(HacTarget target);

/// Kernel long-run covariance of the root sqrt(T)(estimate - truth) for one
/// target family; row/column k corresponds to `index[k]`.
struct LongRunCov {
    Eigen::MatrixXd matrix;
    LagSet index;
    HacTarget target = HacTarget::autocovariance;
};

/**
 * Quadratic form (1/T) sum_{i1,i2} K((i1 - i2)/k_T) R(a, i1) R(b, i2) over the
 * rows of `rows` (targets x T). Rows carry zeros outside their summation range.
 * Offsets with K below `cutoff` are skipped; cutoff 0 gives the full O(T^2) sum.
 */
[[nodiscard]] Eigen::MatrixXd kernel_quadratic_form(const ResidualRows& rows,
                                                    const KernelSpec& spec, double bandwidth,
                                                    double cutoff = kKernelCutoff);

/// Residual rows X_i X_{i-j} - sigma_hat_j for j in H, i = j+1..T.
[[nodiscard]] ResidualRows autocov_residual_rows(const TimeSeries& x,
                                                    const SecondOrderEstimates& est,
                                                    const LagSet& H);

/// Z_hat_{i,j} = -(sigma_j/sigma_0^2)(X_i^2 - sigma_0) + (X_i X_{i-j} - sigma_j)/sigma_0, i = j+1..T.
[[nodiscard]] ResidualRows autocorr_residual_rows(const TimeSeries& x,
                                                     const SecondOrderEstimates& est,
                                                     const LagSet& I);

/// Z_hat_{i,j} = sum_k b_hat_{jk}(X_i X_{i-k} - sigma_k), i = j+1..T. A product
/// X_i X_{i-k} with i <= k does not exist and contributes zero.
[[nodiscard]] ResidualRows arcoef_residual_rows(const TimeSeries& x,
                                                   const SecondOrderEstimates& est, std::size_t p);

[[nodiscard]] LongRunCov hac_autocov_cov(const TimeSeries& x, const SecondOrderEstimates& est,
                                         const LagSet& H, const KernelSpec& spec, double bandwidth,
                                         double cutoff = kKernelCutoff);

[[nodiscard]] LongRunCov hac_autocorr_cov(const TimeSeries& x, const SecondOrderEstimates& est,
                                          const LagSet& I, const KernelSpec& spec, double bandwidth,
                                          double cutoff = kKernelCutoff);

[[nodiscard]] LongRunCov hac_arcoef_cov(const TimeSeries& x, const SecondOrderEstimates& est,
                                        std::size_t p, const KernelSpec& spec, double bandwidth,
                                        double cutoff = kKernelCutoff);

}  // namespace secondwild
