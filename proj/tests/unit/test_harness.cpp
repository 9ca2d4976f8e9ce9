#include <doctest.h>

#include <cmath>
#include <sstream>

#include "secondwild/errors.hpp"
#include "secondwild/harness.hpp"

using namespace secondwild;

namespace {

const CoverageRow& find_row(const CoverageReport& r, const std::string& target, const std::string& method) {
    for (const auto& row : r.rows) {
        if (row.target == target && row.method == method) return row;
    }
    throw std::runtime_error("missing row " + target + "/" + method);
}

CoverageConfig small_coverage() {
    CoverageConfig cfg;
    cfg.scenarios = {parse_scenario("ar1:independent")};
    cfg.T = 300;
    cfg.reps = 200;
    cfg.seed = 3;
    return cfg;
}

}  // namespace

TEST_CASE("scenario names") {
    const auto s = parse_scenario("ar2:product");
    CHECK(s.model == ModelKind::ar2);
    CHECK(s.innovation == InnovationKind::product_of_normals);
    CHECK(s.name() == "ar2:product");
    CHECK(parse_scenario("nonlinear:nonstationary").name() == "nlar2:nonstationary");
    CHECK(all_scenarios().size() == 15);
    for (const auto& sc : all_scenarios()) CHECK(parse_scenario(sc.name()).name() == sc.name());
    try {
        (void)parse_scenario("ar3:product");
        CHECK(false);
    } catch (const DomainError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("invalid scenario 'ar3:product'") != std::string::npos);
        CHECK(msg.find("ma3:independent") != std::string::npos);
    }
    CHECK_THROWS_AS((void)parse_scenario("ar1"), DomainError);
    CHECK(parse_method("sieve") == CoverageMethod::sieve);
    CHECK(method_name(CoverageMethod::wild) == "wild");
    CHECK_THROWS_AS((void)parse_method("block"), DomainError);
}

TEST_CASE("variance study") {
    const auto a = example1_variance_study(2000, 400, 7, 1);
    const auto b = example1_variance_study(2000, 400, 7, 3);
    REQUIRE(a.rows.size() == 3);
    CHECK(a.rows == b.rows);
    CHECK(a.gamma1 == doctest::Approx(0.7 / 0.51));
    for (const auto& row : a.rows) {
        CHECK(row.n == 2000);
        CHECK(row.reps == 400);
        CHECK(row.var_rho >= 0.0);
        CHECK(row.var_gamma >= 0.0);
        CHECK(std::abs(row.mean_rho - 0.7) < 0.02);
    }
    // Gaussian i.i.d. innovations: Bartlett's formulas
    // Var(sqrt(n) rho_hat_1) -> 1 - rho^2,
    // Var(sqrt(n) gamma_hat_1) -> sum_k gamma_k^2 + gamma_{k+1} gamma_{k-1}
    double bartlett = 0.0;
    const double g0 = 1.0 / 0.51;
    for (int k = -400; k <= 400; ++k) {
        auto g = [&](int h) { return g0 * std::pow(0.7, std::abs(h)); };
        bartlett += g(k) * g(k) + g(k + 1) * g(k - 1);
    }
    const auto& iid = a.rows[0];
    CHECK(iid.innovation == InnovationKind::independent);
    CHECK(iid.var_rho == doctest::Approx(0.51).epsilon(0.2));
    CHECK(iid.var_gamma == doctest::Approx(bartlett).epsilon(0.2));
    // fourth-order dependence inflates both variances
    CHECK(a.rows[1].var_rho > iid.var_rho);
    CHECK(a.rows[1].var_gamma > iid.var_gamma);

    CHECK_THROWS_AS((void)example1_variance_study(999, 100, 1), DomainError);
    CHECK_THROWS_AS((void)example1_variance_study(1000, 99, 1), DomainError);
}

TEST_CASE("coverage configuration") {
    auto cfg = small_coverage();
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.reps = 99;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = cfg;
    bad.scenarios.clear();
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = cfg;
    bad.p = 8;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = cfg;
    bad.I = {0};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK(cfg.warp_speed());
}

TEST_CASE("pilot order") {
    const auto s = parse_scenario("ar1:independent");
    CHECK(pilot_order(s, 1000, 7, 1000, 1) == 1);
    CHECK(pilot_order(s, 1000, 7, 1000, 1) == pilot_order(s, 1000, 7, 1000, 1));
    CHECK(pilot_order(parse_scenario("ar4:independent"), 1000, 7, 1000, 1) >= 2);
}

TEST_CASE("coverage study rows") {
    auto cfg = small_coverage();
    const auto r1 = coverage_study(cfg);
    cfg.threads = 3;
    const auto r3 = coverage_study(cfg);
    CHECK(r1.rows == r3.rows);
    REQUIRE(r1.rows.size() == 6);
    for (const auto& row : r1.rows) {
        CHECK(row.model == "ar1");
        CHECK(row.innovation == "independent");
        CHECK(row.order == 1);
        CHECK(row.reps == 200);
        CHECK(row.T == 300);
        CHECK_FALSE(row.truth_approximate);
        CHECK((row.coverage >= 0.0 && row.coverage <= 1.0));
        CHECK(row.se == doctest::Approx(std::sqrt(row.coverage * (1 - row.coverage) / 200)));
        if (row.method == "wild") {
            CHECK(row.mean_k_T >= 1.0);
        } else {
            CHECK(row.mean_k_T == 0.0);
        }
        CHECK(row.coverage > 0.7);
    }

    cfg.alpha = 0.99;
    cfg.methods = {CoverageMethod::wild};
    const auto tiny = coverage_study(cfg);
    for (const auto& row : tiny.rows) CHECK(row.coverage < 0.2);

    auto fixed = small_coverage();
    fixed.methods = {CoverageMethod::wild};
    fixed.p = 2;
    fixed.bandwidth = FixedBandwidth{4.0};
    const auto f = coverage_study(fixed);
    CHECK(f.rows[0].order == 2);
    CHECK(f.rows[0].mean_k_T == 4.0);
}

TEST_CASE("nonlinear truth is flagged approximate") {
    CoverageConfig cfg;
    cfg.scenarios = {parse_scenario("nlar2:independent")};
    cfg.T = 200;
    cfg.reps = 100;
    cfg.methods = {CoverageMethod::wild};
    for (const auto& row : coverage_study(cfg).rows) CHECK(row.truth_approximate);
}

TEST_CASE("sieve and wild agree on i.i.d.-innovation AR data") {
    CoverageConfig cfg;
    cfg.scenarios = {parse_scenario("ar2:independent")};
    cfg.reps = 1000;
    cfg.seed = 11;
    const auto r = coverage_study(cfg);
    const double wild = find_row(r, "ar_coefficients", "wild").coverage;
    const double sieve = find_row(r, "ar_coefficients", "sieve").coverage;
    CHECK(std::abs(wild - sieve) <= 0.03);
}

TEST_CASE("warp-speed and full-B coverage agree") {
    // rho = 0.5: at rho = 0.9 and T = 500 the per-rep radii are too dispersed
    // for the two schemes to agree this closely
    CoverageConfig base;
    base.scenarios = {parse_scenario("ar1:independent")};
    base.scenarios[0].rho = 0.5;
    base.T = 500;
    base.reps = 2000;
    base.methods = {CoverageMethod::wild};
    base.seed = 5;
    auto full = base;
    full.B = 500;
    const auto w = coverage_study(base);
    const auto f = coverage_study(full);
    for (std::size_t i = 0; i < 3; ++i) {
        CAPTURE(w.rows[i].target);
        CHECK(std::abs(w.rows[i].coverage - f.rows[i].coverage) <= 0.03);
    }
}

TEST_CASE("Kolmogorov-Smirnov distance") {
    CHECK(ks_two_sample({1, 2, 3}, {3, 2, 1}) == 0.0);
    CHECK(ks_two_sample({1, 2}, {5, 6, 7}) == 1.0);
    CHECK(ks_two_sample({1, 2}, {1.5}) == doctest::Approx(0.5));
    CHECK(ks_two_sample({0, 1, 2, 3}, {1, 1}) == doctest::Approx(0.5));
    CHECK_THROWS_AS((void)ks_two_sample({}, {1}), DomainError);
}

TEST_CASE("Gaussian approximation check") {
    ApproxCheckConfig cfg;
    cfg.T = 200;
    cfg.reps = 1000;
    cfg.oracle_length = 20000;
    cfg.n_mc = 5000;
    const auto a = gaussian_approx_check(cfg);
    const auto b = gaussian_approx_check(cfg);
    CHECK(a.ks_distance == b.ks_distance);
    CHECK(a.scenario == "ar1:independent");
    CHECK(a.oracle_k_T >= 1.0);
    CHECK((a.ks_distance > 0.0 && a.ks_distance < 0.2));

    auto bad = cfg;
    bad.reps = 999;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = cfg;
    bad.oracle_length = 1999;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = cfg;
    bad.n_mc = 10;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("CSV round trip") {
    SUBCASE("variance study") {
        VarianceStudyReport r;
        r.rows.push_back({InnovationKind::product_of_normals, 0.1 + 0.2, 1.0 / 3.0, 1e-300, 57.34, 10000, 2000});
        r.rows.push_back({InnovationKind::non_stationary, -0.0, 5e-324, 1.7976931348623157e308, 2.0, 1000, 100});
        std::stringstream ss;
        ss << "# manifest {}\n";
        write_variance_csv(ss, r);
        const auto back = read_variance_csv(ss);
        CHECK(back.rows == r.rows);
    }
    SUBCASE("coverage") {
        CoverageReport r;
        r.rows.push_back({"ar2", "product", "ar_coefficients", "sieve", 2, 0.0, 0.7641, 0.0095, 2000, 1000, false});
        r.rows.push_back({"nlar2", "independent", "autocovariance", "wild", 1, 2.8123456789, 0.95, 0.004873, 2000, 1000, true});
        std::stringstream ss;
        write_coverage_csv(ss, r);
        ss << "\n";
        const auto back = read_coverage_csv(ss);
        CHECK(back.rows == r.rows);
    }
    SUBCASE("approximation report") {
        ApproxCheckReport r{"ar1:independent", 2000, 2000, 1000000, 100000, 2.0, 0.0312};
        std::stringstream ss;
        write_approx_csv(ss, r);
        CHECK(ss.str() == "scenario,T,reps,oracle_length,n_mc,oracle_k_T,ks_distance\n"
                          "ar1:independent,2000,2000,1000000,100000,2,0.031199999999999999\n");
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    std::stringstream bad("innovation,n\nindependent,1\n");
    CHECK_THROWS((void)read_variance_csv(bad));
}
