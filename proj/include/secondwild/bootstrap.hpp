#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "secondwild/gaussian.hpp"
#include "secondwild/kernel.hpp"
#include "secondwild/quantile.hpp"
#include "secondwild/series.hpp"

namespace secondwild {

/// Inputs of the second-order wild bootstrap. Defaults: d = 7,
/// H = {0..3}, I = {1..4}, alpha = 0.05, automatic bandwidth.
struct BootstrapConfig {
    std::size_t d = 7;
    std::size_t p = 1;  ///< 0 disables the AR-coefficient family
    LagSet H = {0, 1, 2, 3};
    LagSet I = {1, 2, 3, 4};
    KernelSpec kernel{};
    BandwidthRule bandwidth = AutoBandwidth{};
    std::size_t B = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    std::size_t threads = 1;

    /// Throws DomainError describing the first violated constraint.
    void validate() const;
};

/// Row j holds X_i X_{i-j} - sigma_hat_j for i = j+1..T (T - j entries).
struct ResidualTable {
    std::size_t T = 0;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::span<const double> row(std::size_t j) const { return rows.at(j); }
};

[[nodiscard]] ResidualTable second_order_residuals(const TimeSeries& x,
                                                   const SecondOrderEstimates& est, std::size_t d);

/// One bootstrap world: sigma*_0..d, rho*_j for every lag 0..d (rho*_0 = 1)
/// and a*_1..p = pinv(Sigma*) gamma*.
struct Replicate {
    std::vector<double> sigma;
    std::vector<double> rho;
    std::vector<double> a;
    bool degenerate = false;  ///< sigma*_0 <= 0; rho and a are left empty
};

/// sigma*_j = sigma_hat_j + (1/T) sum_{i=j+1}^T eps_hat_i^(j) * multipliers_i.
[[nodiscard]] Replicate bootstrap_replicate(const SecondOrderEstimates& est,
                                            const ResidualTable& residuals,
                                            std::span<const double> multipliers);

/// The three max-statistics sqrt(T) max |estimate - center| over H, I and 1..p.
struct RootStatistics {
    double sigma = 0.0;
    double rho = 0.0;
    double a = 0.0;
};

/// Max-statistics of a replicate around the sample estimates.
[[nodiscard]] RootStatistics replicate_statistics(const SecondOrderEstimates& est,
                                                  const Replicate& rep);

/// Max-statistics of the sample estimates around given targets (truth or null values).
/// Empty target vectors give 0 for that family. `sigma_target`/`rho_target` are
/// indexed by lag (size > max lag used), `a_target` by k - 1.
[[nodiscard]] RootStatistics root_statistics(const SecondOrderEstimates& est,
                                             std::span<const double> sigma_target,
                                             std::span<const double> rho_target,
                                             std::span<const double> a_target);

struct BootstrapDraws {
    std::vector<double> delta_sigma;
    std::vector<double> delta_rho;
    std::vector<double> delta_a;
};

struct Band {
    std::size_t lag = 0;
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct InferenceReport {
    std::string method;  ///< "wild" or "sieve"
    SecondOrderEstimates estimates;
    double radius_sigma = 0.0;
    double radius_rho = 0.0;
    double radius_a = 0.0;
    std::vector<Band> sigma_bands;
    std::vector<Band> rho_bands;
    std::vector<Band> a_bands;
    // provenance
    double k_T = 0.0;
    std::optional<std::size_t> q_hat;
    std::string bandwidth_rule;
    std::string kernel;
    std::size_t B = 0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::size_t degenerate_resamples = 0;
    std::size_t sieve_order = 0;  ///< sieve only
};

/// Quantiles at 1 - alpha of each family and the bands est +- C / sqrt(T).
void finalize_report(InferenceReport& report, const BootstrapDraws& draws);

/// Writes the T multipliers of replicate b (1-based) for resampling attempt
/// `attempt` (0 first, 1 after a degenerate draw).
using MultiplierSource =
    std::function<void(std::size_t b, std::size_t attempt, std::span<double> out)>;

[[nodiscard]] std::pair<InferenceReport, BootstrapDraws> run_bootstrap(
    const TimeSeries& x, const BootstrapConfig& config, GramFactorCache* cache = nullptr);

/// run_bootstrap with caller-supplied multipliers (testing hook).
[[nodiscard]] std::pair<InferenceReport, BootstrapDraws> run_bootstrap_with(
    const TimeSeries& x, const BootstrapConfig& config, const MultiplierSource& multipliers);

struct FamilyTest {
    double statistic = 0.0;  ///< sqrt(T) max_j |est_j - e_j|
    double critical = 0.0;   ///< C*_{1-alpha}
    bool reject = false;
    double p_value = 1.0;    ///< #{delta* >= statistic} / B
};

struct HypothesisTests {
    std::optional<FamilyTest> sigma;
    std::optional<FamilyTest> rho;
    std::optional<FamilyTest> a;
};

/// Reject H0 for a family iff its statistic exceeds the bootstrap radius.
/// Each hypothesized vector follows its index set (H, I, 1..p); pass nullopt
/// to skip a family. Throws DomainError on length mismatch.
[[nodiscard]] HypothesisTests hypothesis_tests(const InferenceReport& report,
                                               const BootstrapDraws& draws,
                                               const std::optional<std::vector<double>>& sigma_e,
                                               const std::optional<std::vector<double>>& rho_e,
                                               const std::optional<std::vector<double>>& a_e);

/// Radii from the plug-in route: HAC long-run covariances fed to the Monte
/// Carlo Gaussian-max quantile, instead of bootstrap replicates.
struct PluginRadii {
    double sigma = 0.0;
    double rho = 0.0;
    double a = 0.0;
};

[[nodiscard]] PluginRadii plugin_radii(const TimeSeries& x, const SecondOrderEstimates& est,
                                       const KernelSpec& kernel, double bandwidth, double alpha,
                                       std::size_t n_mc, std::uint64_t seed);

}  // namespace secondwild
