#include "secondwild/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "secondwild/errors.hpp"
#include "secondwild/parallel.hpp"
#include "secondwild/yule_walker.hpp"

namespace secondwild {

namespace {

constexpr std::uint64_t kSieveStreamTag = 0x73696576;  // "siev"

}  // namespace

void SieveConfig::validate() const {
    if (B < 1) throw DomainError("B must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (burn_in < 100) throw DomainError("sieve burn_in must be at least 100");
}

double companion_spectral_radius(std::span<const double> a) {
    const auto p = static_cast<Eigen::Index>(a.size());
    if (p == 0) return 0.0;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = a[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::size_t stabilize_ar(std::vector<double>& a) {
    const double limit = 1.0 / (1.0 + kSieveRootMargin);
    for (std::size_t step = 0; step <= kSieveMaxShrinks; ++step) {
        if (companion_spectral_radius(a) < limit) return step;
        if (step == kSieveMaxShrinks) break;
        double factor = 1.0;
        for (auto& v : a) {
            factor *= kSieveShrinkFactor;
            v *= factor;
        }
    }
    throw NumericalError("fitted AR polynomial still has a root inside |z| <= 1 + 1e-6 after " +
                         std::to_string(kSieveMaxShrinks) + " shrink steps");
}

SieveModel fit_sieve_model(const TimeSeries& x, std::size_t p_max) {
    const auto xs = x.values();
    const std::size_t T = xs.size();
    const auto sigma = sample_autocovs(xs, p_max);
    if (!(sigma[0] > 0.0)) throw DegenerateVarianceError("sieve fit: sigma_hat_0 = 0");
    SieveModel model;
    model.order = ar_order_select_aic(sigma, T, p_max).order;
    if (model.order > 0) {
        model.coefficients = yule_walker_fit(sigma, model.order).coefficients;
        model.shrink_steps = stabilize_ar(model.coefficients);
    }
    const std::size_t p = model.order;
    model.residuals.reserve(T - p);
    for (std::size_t t = p; t < T; ++t) {
        double e = xs[t];
        for (std::size_t j = 1; j <= p; ++j) e -= model.coefficients[j - 1] * xs[t - j];
        model.residuals.push_back(e);
    }
    double mean = 0.0;
    for (double e : model.residuals) mean += e;
    mean /= static_cast<double>(model.residuals.size());
    for (double& e : model.residuals) e -= mean;
    return model;
}

std::vector<double> sieve_regenerate(const SieveModel& model, std::size_t T, std::size_t burn_in,
                                     RngStream& stream) {
    if (model.residuals.empty()) throw DomainError("sieve model has no residuals");
    const std::size_t p = model.coefficients.size();
    const std::size_t n = T + burn_in;
    std::vector<double> path(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double v = model.residuals[stream.uniform_index(model.residuals.size())];
        for (std::size_t j = 1; j <= p && j <= t; ++j) v += model.coefficients[j - 1] * path[t - j];
        path[t] = v;
    }
    return {path.begin() + static_cast<std::ptrdiff_t>(burn_in), path.end()};
}

Replicate sieve_replicate(const SecondOrderEstimates& est, const SieveModel& model, std::size_t burn_in,
                          RngStream& stream) {
    const auto xs = sieve_regenerate(model, est.T, burn_in, stream);
    Replicate rep;
    rep.sigma = sample_autocovs(xs, est.d);
    rep.rho.assign(est.d + 1, 0.0);
    rep.rho[0] = 1.0;
    if (rep.sigma[0] > 0.0) {
        for (std::size_t j = 1; j <= est.d; ++j) rep.rho[j] = rep.sigma[j] / rep.sigma[0];
    } else {
        rep.degenerate = true;
    }
    if (est.p > 0) rep.a = yule_walker_pinv(rep.sigma, est.p);
    return rep;
}

RngStream sieve_stream(std::uint64_t seed, std::size_t b) {
    return RngStream(derive_seed(seed, kSieveStreamTag), b);
}

std::pair<InferenceReport, BootstrapDraws> ar_sieve_bootstrap(const TimeSeries& x, std::size_t d,
                                                              std::size_t p, const LagSet& H,
                                                              const LagSet& I, const SieveConfig& cfg) {
    cfg.validate();
    const std::size_t T = x.size();
    if (T <= d) throw DomainError("series length must exceed d");
    if (2 * cfg.p_max >= T) throw DomainError("series too short for sieve order search up to p_max");

    InferenceReport report;
    report.method = "sieve";
    report.estimates = estimate_second_order(x, d, p, H, I);
    report.bandwidth_rule = "none";
    report.kernel = "none";
    report.B = cfg.B;
    report.alpha = cfg.alpha;
    report.seed = cfg.seed;

    const SieveModel model = fit_sieve_model(x, cfg.p_max);
    report.sieve_order = model.order;

    BootstrapDraws draws;
    draws.delta_sigma.resize(cfg.B);
    draws.delta_rho.resize(cfg.B);
    draws.delta_a.resize(cfg.B);
    std::vector<unsigned char> degenerate(cfg.B, 0);
    parallel_for(cfg.B, cfg.threads, [&](std::size_t idx) {
        auto stream = sieve_stream(cfg.seed, idx + 1);
        const auto rep = sieve_replicate(report.estimates, model, cfg.burn_in, stream);
        degenerate[idx] = rep.degenerate ? 1 : 0;
        const auto r = replicate_statistics(report.estimates, rep);
        draws.delta_sigma[idx] = r.sigma;
        draws.delta_rho[idx] = r.rho;
        draws.delta_a[idx] = r.a;
    });
    report.degenerate_resamples =
        static_cast<std::size_t>(std::count(degenerate.begin(), degenerate.end(), 1));
    finalize_report(report, draws);
    return {std::move(report), std::move(draws)};
}

}  // namespace secondwild
