#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace secondwild {

/// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kPinvRelativeTolerance = 1e-10;

/// Moore-Penrose pseudo-inverse via SVD. `truncated` is set when any singular
/// value was dropped.
[[nodiscard]] Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, bool* truncated = nullptr);

/// The p x p symmetric Toeplitz matrix {sigma_|j-k|}.
[[nodiscard]] Eigen::MatrixXd toeplitz_autocov(std::span<const double> sigma, std::size_t p);

struct YuleWalkerFit {
    std::vector<double> coefficients;  ///< a_1..a_p
    bool used_pseudo_inverse = false;
};

/// Solve sum_j a_j sigma_|j-k| = sigma_k, k = 1..p. Uses a Cholesky solve and
/// falls back to the minimum-norm pseudo-inverse solution when the Toeplitz
/// matrix is not numerically positive definite.
[[nodiscard]] YuleWalkerFit yule_walker_fit(std::span<const double> sigma, std::size_t p);

/// a = pinv(Sigma) gamma, unconditionally through the pseudo-inverse.
[[nodiscard]] std::vector<double> yule_walker_pinv(std::span<const double> sigma, std::size_t p);

struct OrderSelection {
    std::size_t order = 0;
    std::vector<double> aic;                 ///< T log v_p + 2p for each p evaluated
    std::vector<double> innovation_variance; ///< Levinson-Durbin v_p
    bool truncated = false;  ///< recursion hit v_p <= 0 and stopped early
};

/// Levinson-Durbin on sigma_0..sigma_{p_max}; argmin_p T log v_p + 2p, ties
/// toward the smaller order.
[[nodiscard]] OrderSelection ar_order_select_aic(std::span<const double> sigma, std::size_t T,
                                                 std::size_t p_max);

/**
 * Row j of `B` holds the weights b_{j,0..p} of the first-order expansion of
 * the Yule-Walker map (a_hat - a) ~ sum_k b_{jk} (sigma_hat_k - sigma_k):
 *
 *   b_0 = -Sigma^{-2} gamma
 *   b_i = Sigma^{-1} e_i - Sigma^{-1} T_i Sigma^{-1} gamma,  i = 1..p-1
 *   b_p = Sigma^{-1} e_p
 *
 * where T_i has ones on the i-th super- and sub-diagonals. The inverse is the
 * pseudo-inverse, so a singular Sigma is handled and flagged.
 */
struct ARLinearization {
    Eigen::MatrixXd B;      ///< p x (p+1)
    Eigen::MatrixXd Sigma;  ///< p x p
    Eigen::VectorXd gamma;  ///< sigma_1..sigma_p
    bool rank_deficient = false;
};

[[nodiscard]] ARLinearization linearization_matrix(std::span<const double> sigma, std::size_t p);

}  // namespace secondwild
