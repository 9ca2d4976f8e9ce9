// Reference implementations used as test oracles. They follow the defining
// formulas literally (double loops, dense solves) and share no code with the
// library beyond the estimate containers.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "secondwild/series.hpp"

namespace oracle {

inline std::vector<double> normal_series(std::size_t n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, scale);
    std::vector<double> x(n);
    for (auto& v : x) v = nd(gen);
    return x;
}

inline std::vector<double> ar1_series(std::size_t n, double rho, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    std::vector<double> x(n);
    double prev = 0.0;
    for (std::size_t t = 0; t < 200 + n; ++t) {
        prev = rho * prev + nd(gen);
        if (t >= 200) x[t - 200] = prev;
    }
    return x;
}

/// (1/T) sum_{i=j+1}^T X_i X_{i-j}, 1-based indices as written.
inline double autocov(const std::vector<double>& x, std::size_t j) {
    const std::size_t T = x.size();
    double s = 0.0;
    for (std::size_t i = j + 1; i <= T; ++i) s += x[i - 1] * x[i - 1 - j];
    return s / static_cast<double>(T);
}

inline double gauss(double u) { return std::exp(-0.5 * u * u); }

/// Generic O(T^2) kernel double sum (1/T) sum_{i1,i2} K((i1-i2)/k) z1(i1) z2(i2),
/// with zfun(j, i) returning 0 outside its range. Indices i are 1-based.
inline double double_sum(std::size_t T, double k,
                         const std::function<double(std::size_t, std::size_t)>& zfun,
                         std::size_t j1, std::size_t j2) {
    double s = 0.0;
    for (std::size_t i1 = 1; i1 <= T; ++i1) {
        const double z1 = zfun(j1, i1);
        if (z1 == 0.0) continue;
        for (std::size_t i2 = 1; i2 <= T; ++i2) {
            const double u = (static_cast<double>(i1) - static_cast<double>(i2)) / k;
            s += gauss(u) * z1 * zfun(j2, i2);
        }
    }
    return s / static_cast<double>(T);
}

/// Yule-Walker coefficients by a dense LU solve.
inline Eigen::VectorXd yw_dense(const std::vector<double>& sigma, std::size_t p) {
    Eigen::MatrixXd S(p, p);
    Eigen::VectorXd g(p);
    for (std::size_t r = 0; r < p; ++r) {
        g(r) = sigma[r + 1];
        for (std::size_t c = 0; c < p; ++c) S(r, c) = sigma[r > c ? r - c : c - r];
    }
    return S.fullPivLu().solve(g);
}

/// d a_j / d sigma_k of the Yule-Walker map by central differences.
inline Eigen::MatrixXd yw_jacobian(const std::vector<double>& sigma, std::size_t p, double h = 1e-6) {
    Eigen::MatrixXd J(p, p + 1);
    for (std::size_t k = 0; k <= p; ++k) {
        auto up = sigma, down = sigma;
        up[k] += h;
        down[k] -= h;
        J.col(static_cast<Eigen::Index>(k)) = (yw_dense(up, p) - yw_dense(down, p)) / (2 * h);
    }
    return J;
}

/// Standard normal CDF.
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Root of f on [lo, hi] by bisection (f(lo) < 0 < f(hi)).
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
