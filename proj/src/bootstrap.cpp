#include "secondwild/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "secondwild/errors.hpp"
#include "secondwild/hac.hpp"
#include "secondwild/parallel.hpp"
#include "secondwild/yule_walker.hpp"

namespace secondwild {

namespace {

constexpr std::uint64_t kWildStreamTag = 0x77696c64;  // "wild"
constexpr std::uint64_t kPluginStreamTag = 0x706c7567;

double max_abs_diff(std::span<const double> est, std::span<const double> center,
                    const LagSet& lags) {
    double m = 0.0;
    for (auto j : lags) m = std::max(m, std::abs(est[j] - center[j]));
    return m;
}

std::vector<Band> make_bands(std::span<const double> values, const LagSet& lags, double radius,
                             double sqrt_T, std::size_t lag_offset) {
    std::vector<Band> bands;
    bands.reserve(lags.size());
    for (auto j : lags) {
        const double est = values[j - lag_offset];
        bands.push_back({j, est, est - radius / sqrt_T, est + radius / sqrt_T});
    }
    return bands;
}

FamilyTest run_family_test(std::span<const double> estimates, std::span<const double> hypothesized,
                           double critical, std::span<const double> draws, double sqrt_T) {
    FamilyTest t;
    double m = 0.0;
    for (std::size_t k = 0; k < estimates.size(); ++k) {
        m = std::max(m, std::abs(estimates[k] - hypothesized[k]));
    }
    t.statistic = sqrt_T * m;
    t.critical = critical;
    t.reject = t.statistic > critical;
    const auto exceed = std::count_if(draws.begin(), draws.end(),
                                      [&](double v) { return v >= t.statistic; });
    t.p_value = draws.empty() ? 1.0
                              : static_cast<double>(exceed) / static_cast<double>(draws.size());
    return t;
}

}  // namespace

void BootstrapConfig::validate() const {
    if (B < 1) throw DomainError("B must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (p > d) throw DomainError("AR order p = " + std::to_string(p) + " exceeds max lag d = " +
                                 std::to_string(d));
    if (H.empty()) throw DomainError("H must be nonempty");
    if (I.empty()) throw DomainError("I must be nonempty");
    for (auto j : H) {
        if (j > d) throw DomainError("H lag " + std::to_string(j) + " exceeds d");
    }
    for (auto j : I) {
        if (j == 0 || j > d) throw DomainError("I lag " + std::to_string(j) + " outside {1..d}");
    }
    if (const auto* fixed = std::get_if<FixedBandwidth>(&bandwidth); fixed && !(fixed->k_T > 0.0)) {
        throw DomainError("fixed bandwidth must be positive");
    }
}

ResidualTable second_order_residuals(const TimeSeries& x, const SecondOrderEstimates& est,
                                     std::size_t d) {
    const auto xs = x.values();
    const std::size_t T = xs.size();
    if (d >= T) throw DomainError("max lag d = " + std::to_string(d) + " must be < T");
    if (est.sigma.size() < d + 1) throw DomainError("estimates do not cover lags 0..d");
    ResidualTable table;
    table.T = T;
    table.rows.resize(d + 1);
    for (std::size_t j = 0; j <= d; ++j) {
        auto& row = table.rows[j];
        row.resize(T - j);
        for (std::size_t i = j; i < T; ++i) row[i - j] = xs[i] * xs[i - j] - est.sigma[j];
    }
    return table;
}

Replicate bootstrap_replicate(const SecondOrderEstimates& est, const ResidualTable& residuals,
                              std::span<const double> multipliers) {
    const std::size_t T = residuals.T;
    if (multipliers.size() != T) throw DomainError("need one multiplier per observation");
    const std::size_t d = residuals.rows.size() - 1;
    Replicate rep;
    rep.sigma.resize(d + 1);
    for (std::size_t j = 0; j <= d; ++j) {
        const auto& row = residuals.rows[j];
        double s = 0.0;
        for (std::size_t i = j; i < T; ++i) s += row[i - j] * multipliers[i];
        rep.sigma[j] = est.sigma[j] + s / static_cast<double>(T);
    }
    if (!(rep.sigma[0] > 0.0)) {
        rep.degenerate = true;
        return rep;
    }
    rep.rho.resize(d + 1);
    for (std::size_t j = 0; j <= d; ++j) rep.rho[j] = rep.sigma[j] / rep.sigma[0];
    if (est.p > 0) rep.a = yule_walker_pinv(rep.sigma, est.p);
    return rep;
}

RootStatistics replicate_statistics(const SecondOrderEstimates& est, const Replicate& rep) {
    const double sqrt_T = std::sqrt(static_cast<double>(est.T));
    RootStatistics r;
    r.sigma = sqrt_T * max_abs_diff(rep.sigma, est.sigma, est.H);
    r.rho = sqrt_T * max_abs_diff(rep.rho, est.rho, est.I);
    double m = 0.0;
    for (std::size_t k = 0; k < est.p; ++k) m = std::max(m, std::abs(rep.a[k] - est.a[k]));
    r.a = sqrt_T * m;
    return r;
}

RootStatistics root_statistics(const SecondOrderEstimates& est, std::span<const double> sigma_target,
                               std::span<const double> rho_target, std::span<const double> a_target) {
    const double sqrt_T = std::sqrt(static_cast<double>(est.T));
    RootStatistics r;
    if (!sigma_target.empty()) r.sigma = sqrt_T * max_abs_diff(est.sigma, sigma_target, est.H);
    if (!rho_target.empty()) r.rho = sqrt_T * max_abs_diff(est.rho, rho_target, est.I);
    if (!a_target.empty()) {
        double m = 0.0;
        for (std::size_t k = 0; k < est.p; ++k) m = std::max(m, std::abs(est.a[k] - a_target[k]));
        r.a = sqrt_T * m;
    }
    return r;
}

void finalize_report(InferenceReport& report, const BootstrapDraws& draws) {
    const auto& est = report.estimates;
    const double level = 1.0 - report.alpha;
    const double sqrt_T = std::sqrt(static_cast<double>(est.T));
    report.radius_sigma = sample_quantile(draws.delta_sigma, level);
    report.radius_rho = sample_quantile(draws.delta_rho, level);
    report.radius_a = est.p > 0 ? sample_quantile(draws.delta_a, level) : 0.0;
    report.sigma_bands = make_bands(est.sigma, est.H, report.radius_sigma, sqrt_T, 0);
    report.rho_bands = make_bands(est.rho, est.I, report.radius_rho, sqrt_T, 0);
    report.a_bands.clear();
    if (est.p > 0) report.a_bands = make_bands(est.a, lag_range(1, est.p), report.radius_a, sqrt_T, 1);
}

std::pair<InferenceReport, BootstrapDraws> run_bootstrap_with(const TimeSeries& x,
                                                              const BootstrapConfig& config,
                                                              const MultiplierSource& multipliers) {
    config.validate();
    if (x.size() <= config.d) throw DomainError("series length must exceed d");

    InferenceReport report;
    report.method = "wild";
    report.estimates = estimate_second_order(x, config.d, config.p, config.H, config.I);
    const auto bw = select_bandwidth(x, config.bandwidth);
    report.k_T = bw.k_T;
    report.q_hat = bw.q_hat;
    report.bandwidth_rule = describe(config.bandwidth);
    report.kernel = kernel_name(config.kernel.kind);
    report.B = config.B;
    report.alpha = config.alpha;
    report.seed = config.seed;

    const auto residuals = second_order_residuals(x, report.estimates, config.d);
    const std::size_t T = x.size();

    BootstrapDraws draws;
    draws.delta_sigma.resize(config.B);
    draws.delta_rho.resize(config.B);
    draws.delta_a.resize(config.B);
    std::vector<unsigned char> resampled(config.B, 0);

    parallel_for(config.B, config.threads, [&](std::size_t idx) {
        const std::size_t b = idx + 1;
        std::vector<double> eps(T);
        multipliers(b, 0, eps);
        auto rep = bootstrap_replicate(report.estimates, residuals, eps);
        if (rep.degenerate) {
            resampled[idx] = 1;
            multipliers(b, 1, eps);
            rep = bootstrap_replicate(report.estimates, residuals, eps);
            if (rep.degenerate) {
                throw DegenerateVarianceError("bootstrap variance sigma*_0 <= 0 twice in replicate " +
                                              std::to_string(b));
            }
        }
        const auto r = replicate_statistics(report.estimates, rep);
        draws.delta_sigma[idx] = r.sigma;
        draws.delta_rho[idx] = r.rho;
        draws.delta_a[idx] = r.a;
    });
    report.degenerate_resamples =
        static_cast<std::size_t>(std::count(resampled.begin(), resampled.end(), 1));
    finalize_report(report, draws);
    return {std::move(report), std::move(draws)};
}

std::pair<InferenceReport, BootstrapDraws> run_bootstrap(const TimeSeries& x,
                                                         const BootstrapConfig& config,
                                                         GramFactorCache* cache) {
    config.validate();
    const auto bw = select_bandwidth(x, config.bandwidth);
    std::shared_ptr<const PsdFactor> factor;
    if (cache) {
        factor = cache->get(config.kernel, x.size(), bw.k_T);
    } else {
        factor = std::make_shared<const PsdFactor>(factorize_kernel_gram(config.kernel, x.size(), bw.k_T));
    }
    const std::uint64_t seed = derive_seed(config.seed, kWildStreamTag);
    const std::size_t B = config.B;
    MultiplierSource gaussian = [&](std::size_t b, std::size_t attempt, std::span<double> out) {
        // resampling attempt uses stream B + b, outside the regular range 1..B
        RngStream stream(seed, attempt == 0 ? b : B + b);
        std::vector<double> z(out.size());
        sample_correlated_normals(*factor, stream, out, z);
    };
    return run_bootstrap_with(x, config, gaussian);
}

HypothesisTests hypothesis_tests(const InferenceReport& report, const BootstrapDraws& draws,
                                 const std::optional<std::vector<double>>& sigma_e,
                                 const std::optional<std::vector<double>>& rho_e,
                                 const std::optional<std::vector<double>>& a_e) {
    const auto& est = report.estimates;
    const double sqrt_T = std::sqrt(static_cast<double>(est.T));
    HypothesisTests out;
    if (sigma_e) {
        if (sigma_e->size() != est.H.size()) {
            throw DomainError("hypothesized autocovariances: expected " + std::to_string(est.H.size()) +
                              " values (one per lag in H), got " + std::to_string(sigma_e->size()));
        }
        std::vector<double> values;
        for (auto j : est.H) values.push_back(est.sigma[j]);
        out.sigma = run_family_test(values, *sigma_e, report.radius_sigma, draws.delta_sigma, sqrt_T);
    }
    if (rho_e) {
        if (rho_e->size() != est.I.size()) {
            throw DomainError("hypothesized autocorrelations: expected " + std::to_string(est.I.size()) +
                              " values (one per lag in I), got " + std::to_string(rho_e->size()));
        }
        std::vector<double> values;
        for (auto j : est.I) values.push_back(est.rho[j]);
        out.rho = run_family_test(values, *rho_e, report.radius_rho, draws.delta_rho, sqrt_T);
    }
    if (a_e) {
        if (a_e->size() != est.p || est.p == 0) {
            throw DomainError("hypothesized AR coefficients: expected " + std::to_string(est.p) +
                              " values, got " + std::to_string(a_e->size()));
        }
        out.a = run_family_test(est.a, *a_e, report.radius_a, draws.delta_a, sqrt_T);
    }
    return out;
}

PluginRadii plugin_radii(const TimeSeries& x, const SecondOrderEstimates& est,
                         const KernelSpec& kernel, double bandwidth, double alpha, std::size_t n_mc,
                         std::uint64_t seed) {
    const std::uint64_t s = derive_seed(seed, kPluginStreamTag);
    PluginRadii r;
    RngStream sigma_stream(s, 0);
    r.sigma =
        gaussian_max_quantile(hac_autocov_cov(x, est, est.H, kernel, bandwidth), alpha, n_mc, sigma_stream);
    RngStream rho_stream(s, 1);
    r.rho =
        gaussian_max_quantile(hac_autocorr_cov(x, est, est.I, kernel, bandwidth), alpha, n_mc, rho_stream);
    if (est.p > 0) {
        RngStream a_stream(s, 2);
        r.a = gaussian_max_quantile(hac_arcoef_cov(x, est, est.p, kernel, bandwidth), alpha, n_mc,
                                    a_stream);
    }
    return r;
}

}  // namespace secondwild
