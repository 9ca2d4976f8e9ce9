#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "secondwild/dgp.hpp"
#include "secondwild/kernel.hpp"
#include "secondwild/series.hpp"

namespace secondwild {

// ---- Example 1: variance of the Yule-Walker estimator under AR(1) ----

struct VarianceStudyRow {
    InnovationKind innovation = InnovationKind::independent;
    double mean_rho = 0.0;
    double var_rho = 0.0;    ///< sample variance of sqrt(n)(rho_hat - rho)
    double mean_gamma = 0.0;
    double var_gamma = 0.0;  ///< sample variance of sqrt(n)(gamma_hat_1 - gamma_1)
    std::size_t n = 0;
    std::size_t reps = 0;

    bool operator==(const VarianceStudyRow&) const = default;
};

struct VarianceStudyReport {
    double rho = 0.7;
    double gamma1 = 0.7 / 0.51;
    std::vector<VarianceStudyRow> rows;  ///< one per innovation kind
};

inline constexpr double kExample1Rho = 0.7;

/// AR(1) with rho = 0.7 under each innovation kind: reps series of length n.
[[nodiscard]] VarianceStudyReport example1_variance_study(std::size_t n, std::size_t reps,
                                                          std::uint64_t seed, std::size_t threads = 1);

// ---- coverage study ----

struct Scenario {
    ModelKind model = ModelKind::ar1;
    InnovationKind innovation = InnovationKind::independent;
    double rho = 0.9;  ///< AR(1) only

    [[nodiscard]] std::string name() const;  ///< "ar2:product"
};

/// Parses "model:innovation"; throws DomainError listing the valid names.
[[nodiscard]] Scenario parse_scenario(const std::string& text);
[[nodiscard]] std::vector<Scenario> all_scenarios();
[[nodiscard]] std::string valid_scenario_names();

enum class CoverageMethod { wild, sieve };
[[nodiscard]] std::string method_name(CoverageMethod m);
[[nodiscard]] CoverageMethod parse_method(const std::string& name);

struct CoverageConfig {
    std::vector<Scenario> scenarios;
    std::size_t T = 1000;
    std::size_t reps = 2000;
    /// 0 selects warp-speed (one replicate per rep, pooled quantile);
    /// otherwise B replicates per rep.
    std::size_t B = 0;
    double alpha = 0.05;
    std::size_t d = 7;
    LagSet H = {0, 1, 2, 3};
    LagSet I = {1, 2, 3, 4};
    /// AR order of the inference; unset means the modal AIC order of
    /// kPilotSeries pilot series, fixed per scenario.
    std::optional<std::size_t> p;
    KernelSpec kernel{};
    BandwidthRule bandwidth = AutoBandwidth{};
    std::vector<CoverageMethod> methods = {CoverageMethod::wild, CoverageMethod::sieve};
    std::size_t sieve_p_max = 7;
    std::size_t burn_in = 1000;
    std::uint64_t seed = 1;
    std::size_t threads = 1;

    void validate() const;
    [[nodiscard]] bool warp_speed() const noexcept { return B == 0; }
};

inline constexpr std::size_t kPilotSeries = 50;

struct CoverageRow {
    std::string model;
    std::string innovation;
    std::string target;  ///< autocovariance | autocorrelation | ar_coefficients
    std::string method;  ///< wild | sieve
    std::size_t order = 0;
    double mean_k_T = 0.0;  ///< 0 for the sieve
    double coverage = 0.0;
    double se = 0.0;  ///< sqrt(c (1 - c) / reps)
    std::size_t reps = 0;
    std::size_t T = 0;
    bool truth_approximate = false;

    bool operator==(const CoverageRow&) const = default;
};

struct CoverageReport {
    std::vector<CoverageRow> rows;
};

/// Modal AIC order (up to p_max) over kPilotSeries series of the scenario.
[[nodiscard]] std::size_t pilot_order(const Scenario& s, std::size_t T, std::size_t p_max,
                                      std::size_t burn_in, std::uint64_t seed);

[[nodiscard]] CoverageReport coverage_study(const CoverageConfig& cfg);

// ---- Gaussian-approximation check ----

struct ApproxCheckConfig {
    Scenario scenario{ModelKind::ar1, InnovationKind::independent, 0.7};
    std::size_t T = 2000;
    std::size_t reps = 2000;
    LagSet H = {0, 1, 2, 3};
    std::size_t oracle_length = 1'000'000;
    std::size_t n_mc = 100'000;
    std::size_t burn_in = 1000;
    KernelSpec kernel{};
    std::uint64_t seed = 1;
    std::size_t threads = 1;

    void validate() const;
};

struct ApproxCheckReport {
    std::string scenario;
    std::size_t T = 0;
    std::size_t reps = 0;
    std::size_t oracle_length = 0;
    std::size_t n_mc = 0;
    double oracle_k_T = 0.0;
    double ks_distance = 0.0;
};

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
[[nodiscard]] double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Compares max_{j in H} sqrt(T)|sigma_hat_j - sigma_j| over reps series with
/// the Gaussian-max law fed one HAC evaluation on an oracle_length realization.
[[nodiscard]] ApproxCheckReport gaussian_approx_check(const ApproxCheckConfig& cfg);

// ---- CSV round trip; '#' lines are comments ----

void write_variance_csv(std::ostream& os, const VarianceStudyReport& r);
[[nodiscard]] VarianceStudyReport read_variance_csv(std::istream& is);
void write_coverage_csv(std::ostream& os, const CoverageReport& r);
[[nodiscard]] CoverageReport read_coverage_csv(std::istream& is);
void write_approx_csv(std::ostream& os, const ApproxCheckReport& r);

/// "%.17g" formatting, exact on round trip.
[[nodiscard]] std::string format_double(double v);

}  // namespace secondwild
