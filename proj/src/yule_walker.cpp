#include "secondwild/yule_walker.hpp"

#include <cmath>
#include <string>

#include "secondwild/errors.hpp"

namespace secondwild {

namespace {

void require_sigma(std::span<const double> sigma, std::size_t p) {
    if (p == 0) throw DomainError("AR order must be at least 1");
    if (sigma.size() < p + 1) {
        throw DomainError("need " + std::to_string(p + 1) + " autocovariances for order " +
                          std::to_string(p) + ", got " + std::to_string(sigma.size()));
    }
}

Eigen::VectorXd gamma_vector(std::span<const double> sigma, std::size_t p) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(p));
    for (std::size_t k = 0; k < p; ++k) g(static_cast<Eigen::Index>(k)) = sigma[k + 1];
    return g;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, bool* truncated) {
    if (truncated) *truncated = false;
    if (m.size() == 0) return Eigen::MatrixXd(m.cols(), m.rows());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double cutoff = kPinvRelativeTolerance * s(0);
    Eigen::VectorXd inv(s.size());
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s(k) > cutoff && s(k) > 0.0) {
            inv(k) = 1.0 / s(k);
        } else {
            inv(k) = 0.0;
            if (truncated) *truncated = true;
        }
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd toeplitz_autocov(std::span<const double> sigma, std::size_t p) {
    if (sigma.size() < p) throw DomainError("not enough autocovariances for Toeplitz matrix");
    const auto n = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) m(j, k) = sigma[static_cast<std::size_t>(std::abs(j - k))];
    }
    return m;
}

YuleWalkerFit yule_walker_fit(std::span<const double> sigma, std::size_t p) {
    require_sigma(sigma, p);
    const Eigen::MatrixXd S = toeplitz_autocov(sigma, p);
    const Eigen::VectorXd g = gamma_vector(sigma, p);

    YuleWalkerFit fit;
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() == Eigen::Success && llt.rcond() > kPinvRelativeTolerance) {
        fit.coefficients = to_std(llt.solve(g));
        return fit;
    }
    fit.used_pseudo_inverse = true;
    fit.coefficients = to_std(pseudo_inverse(S) * g);
    return fit;
}

std::vector<double> yule_walker_pinv(std::span<const double> sigma, std::size_t p) {
    require_sigma(sigma, p);
    return to_std(pseudo_inverse(toeplitz_autocov(sigma, p)) * gamma_vector(sigma, p));
}

OrderSelection ar_order_select_aic(std::span<const double> sigma, std::size_t T, std::size_t p_max) {
    if (sigma.size() < p_max + 1) throw DomainError("not enough autocovariances for p_max");
    if (2 * p_max >= T && p_max > 0) throw DomainError("p_max must be below T/2");

    OrderSelection sel;
    const double n = static_cast<double>(T);
    double v = sigma[0];
    if (!(v > 0.0)) {
        sel.truncated = true;
        return sel;
    }
    sel.innovation_variance.push_back(v);
    sel.aic.push_back(n * std::log(v));

    std::vector<double> phi;  // phi_{k,1..k}
    for (std::size_t k = 1; k <= p_max; ++k) {
        double num = sigma[k];
        for (std::size_t j = 1; j < k; ++j) num -= phi[j - 1] * sigma[k - j];
        const double reflection = num / v;
        std::vector<double> next(k);
        for (std::size_t j = 1; j < k; ++j) next[j - 1] = phi[j - 1] - reflection * phi[k - j - 1];
        next[k - 1] = reflection;
        const double v_next = v * (1.0 - reflection * reflection);
        if (!(v_next > 0.0)) {
            sel.truncated = true;
            break;
        }
        phi = std::move(next);
        v = v_next;
        sel.innovation_variance.push_back(v);
        sel.aic.push_back(n * std::log(v) + 2.0 * static_cast<double>(k));
    }

    for (std::size_t k = 1; k < sel.aic.size(); ++k) {
        if (sel.aic[k] < sel.aic[sel.order]) sel.order = k;
    }
    return sel;
}

ARLinearization linearization_matrix(std::span<const double> sigma, std::size_t p) {
    require_sigma(sigma, p);
    const auto n = static_cast<Eigen::Index>(p);

    ARLinearization lin;
    lin.Sigma = toeplitz_autocov(sigma, p);
    lin.gamma = gamma_vector(sigma, p);
    const Eigen::MatrixXd P = pseudo_inverse(lin.Sigma, &lin.rank_deficient);
    const Eigen::VectorXd a = P * lin.gamma;

    lin.B.resize(n, n + 1);
    lin.B.col(0) = -P * a;
    for (Eigen::Index i = 1; i < n; ++i) {
        Eigen::MatrixXd Ti = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j + i < n) {
                Ti(j, j + i) = 1.0;
                Ti(j + i, j) = 1.0;
            }
        }
        lin.B.col(i) = P.col(i - 1) - P * (Ti * a);
    }
    lin.B.col(n) = P.col(n - 1);
    return lin;
}

}  // namespace secondwild
