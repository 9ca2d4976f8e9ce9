#include "secondwild/hac.hpp"

#include "secondwild/errors.hpp"
#include "secondwild/yule_walker.hpp"

namespace secondwild {

namespace {

void check_bandwidth(double bandwidth) {
    if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
}

void check_lags(const SecondOrderEstimates& est, const LagSet& lags, std::size_t min_lag,
                const char* name) {
    if (lags.empty()) throw DomainError(std::string("empty index set ") + name);
    for (auto j : lags) {
        if (j < min_lag || j > est.d || j >= est.sigma.size()) {
            throw DomainError(std::string("lag ") + std::to_string(j) + " outside the range of " +
                              name);
        }
    }
}

double require_variance(const SecondOrderEstimates& est) {
    if (est.sigma.empty() || !(est.sigma[0] > 0.0)) {
        throw DegenerateVarianceError("sample variance is zero");
    }
    return est.sigma[0];
}

}  // namespace

std::string target_name(HacTarget target) {
    switch (target) {
        case HacTarget::autocovariance:
            return "autocovariance";
        case HacTarget::autocorrelation:
            return "autocorrelation";
        case HacTarget::ar_coefficients:
            return "ar_coefficients";
    }
    return "unknown";
}

Eigen::MatrixXd kernel_quadratic_form(const ResidualRows& rows, const KernelSpec& spec,
                                      double bandwidth, double cutoff) {
    check_bandwidth(bandwidth);
    const Eigen::Index m = rows.rows();
    const Eigen::Index T = rows.cols();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
    if (T == 0) return out;
    const auto window = static_cast<Eigen::Index>(
        kernel_window(spec, bandwidth, static_cast<std::size_t>(T), cutoff));

    // out(a,b) = sum_h K(h) C_ab(h),  C_ab(h) = sum_i R(a, i + h) R(b, i)
    for (Eigen::Index h = 0; h <= window; ++h) {
        const double w = spec(static_cast<double>(h) / bandwidth);
        if (cutoff > 0.0 && w < cutoff) continue;
        const Eigen::Index len = T - h;
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index b = a; b < m; ++b) {
                const double ab = rows.row(a).segment(h, len).dot(rows.row(b).segment(0, len));
                if (h == 0) {
                    out(a, b) += w * ab;
                } else {
                    const double ba = rows.row(b).segment(h, len).dot(rows.row(a).segment(0, len));
                    out(a, b) += w * (ab + ba);
                }
            }
        }
    }
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < a; ++b) out(a, b) = out(b, a);
    }
    return out / static_cast<double>(T);
}

ResidualRows autocov_residual_rows(const TimeSeries& x, const SecondOrderEstimates& est,
                                      const LagSet& H) {
    check_lags(est, H, 0, "H");
    const auto xs = x.values();
    const auto T = static_cast<Eigen::Index>(xs.size());
    ResidualRows rows = ResidualRows::Zero(static_cast<Eigen::Index>(H.size()), T);
    for (std::size_t r = 0; r < H.size(); ++r) {
        const auto j = static_cast<Eigen::Index>(H[r]);
        for (Eigen::Index i = j; i < T; ++i) {
            rows(static_cast<Eigen::Index>(r), i) =
                xs[static_cast<std::size_t>(i)] * xs[static_cast<std::size_t>(i - j)] - est.sigma[H[r]];
        }
    }
    return rows;
}

ResidualRows autocorr_residual_rows(const TimeSeries& x, const SecondOrderEstimates& est,
                                       const LagSet& I) {
    check_lags(est, I, 1, "I");
    const double s0 = require_variance(est);
    const auto xs = x.values();
    const auto T = static_cast<Eigen::Index>(xs.size());
    ResidualRows rows = ResidualRows::Zero(static_cast<Eigen::Index>(I.size()), T);
    for (std::size_t r = 0; r < I.size(); ++r) {
        const auto j = static_cast<Eigen::Index>(I[r]);
        const double sj = est.sigma[I[r]];
        for (Eigen::Index i = j; i < T; ++i) {
            const double xi = xs[static_cast<std::size_t>(i)];
            const double lagged = xi * xs[static_cast<std::size_t>(i - j)];
            rows(static_cast<Eigen::Index>(r), i) =
                -(sj / (s0 * s0)) * (xi * xi - s0) + (lagged - sj) / s0;
        }
    }
    return rows;
}

ResidualRows arcoef_residual_rows(const TimeSeries& x, const SecondOrderEstimates& est,
                                     std::size_t p) {
    if (p == 0) throw DomainError("AR order must be at least 1");
    if (est.sigma.size() < p + 1) throw DomainError("estimates do not cover lags 0..p");
    const auto lin = linearization_matrix(std::span<const double>(est.sigma).first(p + 1), p);
    const auto xs = x.values();
    const auto T = static_cast<Eigen::Index>(xs.size());
    const auto P = static_cast<Eigen::Index>(p);
    ResidualRows rows = ResidualRows::Zero(P, T);
    for (Eigen::Index j = 1; j <= P; ++j) {
        for (Eigen::Index i = j; i < T; ++i) {
            double z = 0.0;
            for (Eigen::Index k = 0; k <= P && k <= i; ++k) {
                z += lin.B(j - 1, k) * (xs[static_cast<std::size_t>(i)] *
                                            xs[static_cast<std::size_t>(i - k)] -
                                        est.sigma[static_cast<std::size_t>(k)]);
            }
            rows(j - 1, i) = z;
        }
    }
    return rows;
}

LongRunCov hac_autocov_cov(const TimeSeries& x, const SecondOrderEstimates& est, const LagSet& H,
                           const KernelSpec& spec, double bandwidth, double cutoff) {
    check_bandwidth(bandwidth);
    return {kernel_quadratic_form(autocov_residual_rows(x, est, H), spec, bandwidth, cutoff), H,
            HacTarget::autocovariance};
}

LongRunCov hac_autocorr_cov(const TimeSeries& x, const SecondOrderEstimates& est, const LagSet& I,
                            const KernelSpec& spec, double bandwidth, double cutoff) {
    check_bandwidth(bandwidth);
    return {kernel_quadratic_form(autocorr_residual_rows(x, est, I), spec, bandwidth, cutoff), I,
            HacTarget::autocorrelation};
}

LongRunCov hac_arcoef_cov(const TimeSeries& x, const SecondOrderEstimates& est, std::size_t p,
                          const KernelSpec& spec, double bandwidth, double cutoff) {
    check_bandwidth(bandwidth);
    return {kernel_quadratic_form(arcoef_residual_rows(x, est, p), spec, bandwidth, cutoff),
            lag_range(1, p), HacTarget::ar_coefficients};
}

}  // namespace secondwild
