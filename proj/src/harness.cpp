#include "secondwild/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "secondwild/bootstrap.hpp"
#include "secondwild/errors.hpp"
#include "secondwild/gaussian.hpp"
#include "secondwild/hac.hpp"
#include "secondwild/parallel.hpp"
#include "secondwild/quantile.hpp"
#include "secondwild/sieve.hpp"
#include "secondwild/yule_walker.hpp"

namespace secondwild {

namespace {

constexpr std::uint64_t kExample1Tag = 0x65786d31;  // "exm1"
constexpr std::uint64_t kPilotTag = 0x70696c74;
constexpr std::uint64_t kCoverageSeriesTag = 0x63767273;
constexpr std::uint64_t kCoverageWildTag = 0x63767277;
constexpr std::uint64_t kCoverageSieveTag = 0x63767376;
constexpr std::uint64_t kApproxSeriesTag = 0x61707873;
constexpr std::uint64_t kApproxOracleTag = 0x6170786f;
constexpr std::uint64_t kApproxMaxTag = 0x6170786d;

// FNV-1a, so a scenario's streams do not depend on its position in the list
std::uint64_t name_hash(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

double sample_variance(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

// Data lines of a CSV: skips '#' comments and the header.
std::vector<std::vector<std::string>> read_rows(std::istream& is, std::size_t columns) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        auto cells = split_csv(line);
        if (cells.size() != columns) {
            throw DomainError("expected " + std::to_string(columns) + " columns, got " +
                              std::to_string(cells.size()) + ": " + line);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

double parse_double(const std::string& cell) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw DomainError("not a number: '" + cell + "'");
    }
    return v;
}

const char* const kTargetNames[] = {"autocovariance", "autocorrelation", "ar_coefficients"};

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- Example 1 ----

VarianceStudyReport example1_variance_study(std::size_t n, std::size_t reps, std::uint64_t seed,
                                            std::size_t threads) {
    if (n < 1000) throw DomainError("example1: n must be at least 1000");
    if (reps < 100) throw DomainError("example1: reps must be at least 100");
    VarianceStudyReport report;
    report.rho = kExample1Rho;
    report.gamma1 = kExample1Rho / (1.0 - kExample1Rho * kExample1Rho);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    for (InnovationKind kind : kAllInnovations) {
        std::vector<double> rho_hat(reps), gamma_hat(reps);
        const std::uint64_t kind_seed = derive_seed(seed, kExample1Tag + static_cast<std::uint64_t>(kind));
        parallel_for(reps, threads, [&](std::size_t r) {
            DgpSpec spec;
            spec.model = ModelKind::ar1;
            spec.rho = kExample1Rho;
            spec.innovation = kind;
            spec.T = n;
            spec.seed = kind_seed;
            spec.stream = r;
            const auto x = gen_series(spec);
            const double s0 = sample_autocov(x, 0);
            const double s1 = sample_autocov(x, 1);
            rho_hat[r] = s1 / s0;
            gamma_hat[r] = s1;
        });
        VarianceStudyRow row;
        row.innovation = kind;
        row.n = n;
        row.reps = reps;
        row.mean_rho = mean_of(rho_hat);
        row.mean_gamma = mean_of(gamma_hat);
        std::vector<double> zr(reps), zg(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            zr[r] = sqrt_n * (rho_hat[r] - report.rho);
            zg[r] = sqrt_n * (gamma_hat[r] - report.gamma1);
        }
        row.var_rho = sample_variance(zr, mean_of(zr));
        row.var_gamma = sample_variance(zg, mean_of(zg));
        report.rows.push_back(row);
    }
    return report;
}

// ---- scenarios ----

std::string Scenario::name() const { return model_name(model) + ":" + innovation_name(innovation); }

std::vector<Scenario> all_scenarios() {
    std::vector<Scenario> out;
    for (ModelKind m : kAllModels) {
        for (InnovationKind k : kAllInnovations) out.push_back({m, k, 0.9});
    }
    return out;
}

std::string valid_scenario_names() {
    std::string s;
    for (const auto& sc : all_scenarios()) {
        if (!s.empty()) s += ", ";
        s += sc.name();
    }
    return s;
}

Scenario parse_scenario(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) throw DomainError("missing ':'");
        Scenario s;
        s.model = parse_model(text.substr(0, colon));
        s.innovation = parse_innovation(text.substr(colon + 1));
        return s;
    } catch (const DomainError&) {
        throw DomainError("invalid scenario '" + text + "'; valid names: " + valid_scenario_names());
    }
}

std::string method_name(CoverageMethod m) { return m == CoverageMethod::wild ? "wild" : "sieve"; }

CoverageMethod parse_method(const std::string& name) {
    if (name == "wild") return CoverageMethod::wild;
    if (name == "sieve") return CoverageMethod::sieve;
    throw DomainError("unknown method '" + name + "' (valid: wild, sieve)");
}

void CoverageConfig::validate() const {
    if (scenarios.empty()) throw DomainError("coverage: no scenarios");
    if (reps < 100) throw DomainError("coverage: reps must be at least 100");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (d >= T) throw DomainError("coverage: d must be < T");
    if (p && *p > d) throw DomainError("coverage: p exceeds d");
    if (2 * sieve_p_max >= T) throw DomainError("coverage: sieve p_max too large for T");
    if (methods.empty()) throw DomainError("coverage: no methods");
    BootstrapConfig probe;
    probe.d = d;
    probe.p = p.value_or(0);
    probe.H = H;
    probe.I = I;
    probe.bandwidth = bandwidth;
    probe.alpha = alpha;
    probe.validate();
}

std::size_t pilot_order(const Scenario& s, std::size_t T, std::size_t p_max, std::size_t burn_in,
                        std::uint64_t seed) {
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t r = 0; r < kPilotSeries; ++r) {
        DgpSpec spec{s.model, s.rho, s.innovation, T, burn_in,
                     derive_seed(seed, kPilotTag ^ name_hash(s.name())), r};
        const auto x = gen_series(spec);
        const auto sigma = sample_autocovs(x.values(), p_max);
        ++counts[ar_order_select_aic(sigma, T, p_max).order];
    }
    std::size_t best = 0, best_count = 0;
    for (auto [order, c] : counts) {  // ascending order: ties go to the smaller order
        if (c > best_count) {
            best = order;
            best_count = c;
        }
    }
    return best;
}

namespace {

struct RepOutcome {
    RootStatistics root;
    RootStatistics delta;  ///< warp-speed replicate
    RootStatistics radius; ///< full mode
    double k_T = 0.0;
};

void push_rows(CoverageReport& report, const Scenario& s, CoverageMethod method, std::size_t order,
               double mean_k_T, const std::vector<RepOutcome>& outcomes, const CoverageConfig& cfg,
               bool approximate) {
    const std::size_t reps = outcomes.size();
    const double level = 1.0 - cfg.alpha;
    for (int target = 0; target < 3; ++target) {
        auto pick = [target](const RootStatistics& r) {
            return target == 0 ? r.sigma : target == 1 ? r.rho : r.a;
        };
        double pooled = 0.0;
        if (cfg.warp_speed()) {
            std::vector<double> deltas(reps);
            for (std::size_t r = 0; r < reps; ++r) deltas[r] = pick(outcomes[r].delta);
            pooled = sample_quantile(deltas, level);
        }
        std::size_t covered = 0;
        for (const auto& o : outcomes) {
            const double radius = cfg.warp_speed() ? pooled : pick(o.radius);
            if (pick(o.root) <= radius) ++covered;
        }
        CoverageRow row;
        row.model = model_name(s.model);
        row.innovation = innovation_name(s.innovation);
        row.target = kTargetNames[target];
        row.method = method_name(method);
        row.order = order;
        row.mean_k_T = mean_k_T;
        row.coverage = static_cast<double>(covered) / static_cast<double>(reps);
        row.se = std::sqrt(row.coverage * (1.0 - row.coverage) / static_cast<double>(reps));
        row.reps = reps;
        row.T = cfg.T;
        row.truth_approximate = approximate;
        report.rows.push_back(row);
    }
}

}  // namespace

CoverageReport coverage_study(const CoverageConfig& cfg) {
    cfg.validate();
    CoverageReport report;
    GramFactorCache cache;
    for (const auto& s : cfg.scenarios) {
        const std::uint64_t scenario_seed = cfg.seed ^ name_hash(s.name());
        const std::size_t p =
            cfg.p ? *cfg.p : std::max<std::size_t>(1, pilot_order(s, cfg.T, std::min(cfg.sieve_p_max, cfg.d),
                                                                  cfg.burn_in, cfg.seed));
        const auto truth = true_parameters(s.model, s.rho, s.innovation, cfg.d, p);
        const std::uint64_t series_seed = derive_seed(scenario_seed, kCoverageSeriesTag);
        auto series = [&](std::size_t r) {
            DgpSpec spec{s.model, s.rho, s.innovation, cfg.T, cfg.burn_in, series_seed, r};
            return gen_series(spec);
        };

        for (CoverageMethod method : cfg.methods) {
            std::vector<RepOutcome> outcomes(cfg.reps);
            const std::size_t inner_threads = 1;
            if (method == CoverageMethod::wild) {
                const std::uint64_t wild_seed = derive_seed(scenario_seed, kCoverageWildTag);
                parallel_for(cfg.reps, cfg.threads, [&](std::size_t r) {
                    const auto x = series(r);
                    const auto est = estimate_second_order(x, cfg.d, p, cfg.H, cfg.I);
                    auto& o = outcomes[r];
                    o.root = root_statistics(est, truth.sigma, truth.rho, truth.a);
                    if (cfg.warp_speed()) {
                        const auto bw = select_bandwidth(x, cfg.bandwidth);
                        o.k_T = bw.k_T;
                        const auto factor = cache.get(cfg.kernel, cfg.T, bw.k_T);
                        const auto residuals = second_order_residuals(x, est, cfg.d);
                        std::vector<double> eps(cfg.T), z(cfg.T);
                        RngStream stream(wild_seed, r);
                        sample_correlated_normals(*factor, stream, eps, z);
                        auto rep = bootstrap_replicate(est, residuals, eps);
                        if (rep.degenerate) {
                            RngStream retry(wild_seed, cfg.reps + r);
                            sample_correlated_normals(*factor, retry, eps, z);
                            rep = bootstrap_replicate(est, residuals, eps);
                            if (rep.degenerate) {
                                throw DegenerateVarianceError("warp-speed replicate degenerate twice");
                            }
                        }
                        o.delta = replicate_statistics(est, rep);
                    } else {
                        BootstrapConfig bc;
                        bc.d = cfg.d;
                        bc.p = p;
                        bc.H = cfg.H;
                        bc.I = cfg.I;
                        bc.kernel = cfg.kernel;
                        bc.bandwidth = cfg.bandwidth;
                        bc.B = cfg.B;
                        bc.alpha = cfg.alpha;
                        bc.seed = derive_seed(wild_seed, r);
                        bc.threads = inner_threads;
                        const auto [rep, draws] = run_bootstrap(x, bc, &cache);
                        o.k_T = rep.k_T;
                        o.radius = {rep.radius_sigma, rep.radius_rho, rep.radius_a};
                    }
                });
                double sum_k = 0.0;
                for (const auto& o : outcomes) sum_k += o.k_T;
                push_rows(report, s, method, p, sum_k / static_cast<double>(cfg.reps), outcomes, cfg,
                          truth.approximate);
            } else {
                const std::uint64_t sieve_seed = derive_seed(scenario_seed, kCoverageSieveTag);
                parallel_for(cfg.reps, cfg.threads, [&](std::size_t r) {
                    const auto x = series(r);
                    const auto est = estimate_second_order(x, cfg.d, p, cfg.H, cfg.I);
                    auto& o = outcomes[r];
                    o.root = root_statistics(est, truth.sigma, truth.rho, truth.a);
                    if (cfg.warp_speed()) {
                        const auto model = fit_sieve_model(x, cfg.sieve_p_max);
                        auto stream = sieve_stream(sieve_seed, r);
                        o.delta = replicate_statistics(est, sieve_replicate(est, model, cfg.burn_in, stream));
                    } else {
                        SieveConfig sc;
                        sc.p_max = cfg.sieve_p_max;
                        sc.B = cfg.B;
                        sc.alpha = cfg.alpha;
                        sc.seed = derive_seed(sieve_seed, r);
                        sc.burn_in = cfg.burn_in;
                        sc.threads = inner_threads;
                        const auto [rep, draws] = ar_sieve_bootstrap(x, cfg.d, p, cfg.H, cfg.I, sc);
                        o.radius = {rep.radius_sigma, rep.radius_rho, rep.radius_a};
                    }
                });
                push_rows(report, s, method, p, 0.0, outcomes, cfg, truth.approximate);
            }
        }
    }
    return report;
}

// ---- Gaussian approximation ----

void ApproxCheckConfig::validate() const {
    if (reps < 1000) throw DomainError("approx-check: reps must be at least 1000");
    if (H.empty()) throw DomainError("approx-check: H must be nonempty");
    const std::size_t d = H.back();
    if (d >= T) throw DomainError("approx-check: max lag in H must be < T");
    if (oracle_length < 10 * T) throw DomainError("approx-check: oracle_length must be at least 10 T");
    if (n_mc < 1000) throw DomainError("approx-check: n_mc must be at least 1000");
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

ApproxCheckReport gaussian_approx_check(const ApproxCheckConfig& cfg) {
    cfg.validate();
    const auto& s = cfg.scenario;
    const std::size_t d = cfg.H.back();
    const auto truth = true_parameters(s.model, s.rho, s.innovation, d, 0);

    ApproxCheckReport report;
    report.scenario = s.name();
    report.T = cfg.T;
    report.reps = cfg.reps;
    report.oracle_length = cfg.oracle_length;
    report.n_mc = cfg.n_mc;

    // oracle: long-run covariance from a single long realization
    DgpSpec long_spec{s.model, s.rho, s.innovation, cfg.oracle_length, cfg.burn_in,
                      derive_seed(cfg.seed, kApproxOracleTag), 0};
    const auto long_x = gen_series(long_spec);
    const std::size_t est_d = std::max<std::size_t>(d, 1);
    const auto long_est = estimate_second_order(long_x, est_d, 0, cfg.H, lag_range(1, est_d));
    const auto bw = select_bandwidth(long_x, AutoBandwidth{});
    report.oracle_k_T = bw.k_T;
    const auto cov = hac_autocov_cov(long_x, long_est, cfg.H, cfg.kernel, bw.k_T);
    RngStream max_stream(derive_seed(cfg.seed, kApproxMaxTag), 0);
    const auto oracle = gaussian_max_draws(cov.matrix, cfg.n_mc, max_stream);

    const std::uint64_t series_seed = derive_seed(cfg.seed, kApproxSeriesTag);
    const double sqrt_T = std::sqrt(static_cast<double>(cfg.T));
    std::vector<double> stats(cfg.reps);
    parallel_for(cfg.reps, cfg.threads, [&](std::size_t r) {
        DgpSpec spec{s.model, s.rho, s.innovation, cfg.T, cfg.burn_in, series_seed, r};
        const auto x = gen_series(spec);
        const auto sigma = sample_autocovs(x.values(), d);
        double m = 0.0;
        for (auto j : cfg.H) m = std::max(m, std::abs(sigma[j] - truth.sigma[j]));
        stats[r] = sqrt_T * m;
    });
    report.ks_distance = ks_two_sample(std::move(stats), oracle);
    return report;
}

// ---- CSV ----

void write_variance_csv(std::ostream& os, const VarianceStudyReport& r) {
    os << "innovation,n,reps,mean_rho,var_rho,mean_gamma1,var_gamma1\n";
    for (const auto& row : r.rows) {
        os << innovation_name(row.innovation) << ',' << row.n << ',' << row.reps << ','
           << format_double(row.mean_rho) << ',' << format_double(row.var_rho) << ','
           << format_double(row.mean_gamma) << ',' << format_double(row.var_gamma) << '\n';
    }
}

VarianceStudyReport read_variance_csv(std::istream& is) {
    VarianceStudyReport r;
    for (const auto& c : read_rows(is, 7)) {
        VarianceStudyRow row;
        row.innovation = parse_innovation(c[0]);
        row.n = std::stoull(c[1]);
        row.reps = std::stoull(c[2]);
        row.mean_rho = parse_double(c[3]);
        row.var_rho = parse_double(c[4]);
        row.mean_gamma = parse_double(c[5]);
        row.var_gamma = parse_double(c[6]);
        r.rows.push_back(row);
    }
    return r;
}

void write_coverage_csv(std::ostream& os, const CoverageReport& r) {
    os << "model,innovation,target,method,order,mean_k_T,coverage,se,reps,T,truth_approximate\n";
    for (const auto& row : r.rows) {
        os << row.model << ',' << row.innovation << ',' << row.target << ',' << row.method << ','
           << row.order << ',' << format_double(row.mean_k_T) << ',' << format_double(row.coverage)
           << ',' << format_double(row.se) << ',' << row.reps << ',' << row.T << ','
           << (row.truth_approximate ? 1 : 0) << '\n';
    }
}

CoverageReport read_coverage_csv(std::istream& is) {
    CoverageReport r;
    for (const auto& c : read_rows(is, 11)) {
        CoverageRow row;
        row.model = c[0];
        row.innovation = c[1];
        row.target = c[2];
        row.method = c[3];
        row.order = std::stoull(c[4]);
        row.mean_k_T = parse_double(c[5]);
        row.coverage = parse_double(c[6]);
        row.se = parse_double(c[7]);
        row.reps = std::stoull(c[8]);
        row.T = std::stoull(c[9]);
        row.truth_approximate = c[10] == "1";
        r.rows.push_back(row);
    }
    return r;
}

void write_approx_csv(std::ostream& os, const ApproxCheckReport& r) {
    os << "scenario,T,reps,oracle_length,n_mc,oracle_k_T,ks_distance\n";
    os << r.scenario << ',' << r.T << ',' << r.reps << ',' << r.oracle_length << ',' << r.n_mc << ','
       << format_double(r.oracle_k_T) << ',' << format_double(r.ks_distance) << '\n';
}

}  // namespace secondwild
