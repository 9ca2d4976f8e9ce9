#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "secondwild/dgp.hpp"
#include "secondwild/errors.hpp"

using namespace secondwild;

namespace {

constexpr std::size_t kMillion = 1'000'000;

TimeSeries make(ModelKind m, InnovationKind k, std::size_t T, std::uint64_t seed, double rho = 0.9,
                std::size_t burn_in = 1000) {
    DgpSpec s;
    s.model = m;
    s.innovation = k;
    s.rho = rho;
    s.T = T;
    s.seed = seed;
    s.burn_in = burn_in;
    return gen_series(s);
}

std::vector<double> as_vector(const TimeSeries& x) { return {x.values().begin(), x.values().end()}; }

}  // namespace

TEST_CASE("names") {
    for (auto k : kAllInnovations) CHECK(parse_innovation(innovation_name(k)) == k);
    for (auto m : kAllModels) CHECK(parse_model(model_name(m)) == m);
    CHECK(parse_innovation("product_of_normals") == InnovationKind::product_of_normals);
    CHECK(parse_model("nonlinear") == ModelKind::nlar2);
    CHECK_THROWS_AS((void)parse_model("arma"), DomainError);
    CHECK_THROWS_AS((void)parse_innovation("garch"), DomainError);
}

TEST_CASE("innovation moments") {
    for (auto kind : kAllInnovations) {
        CAPTURE(innovation_name(kind));
        const auto e = gen_innovations(kind, kMillion, RngStream(5, static_cast<std::uint64_t>(kind)));
        double m = 0.0, v = 0.0;
        for (double x : e) m += x;
        m /= kMillion;
        for (double x : e) v += (x - m) * (x - m);
        v /= kMillion - 1;
        CHECK(std::abs(m) < 0.005);
        CHECK(std::abs(v - 1.0) < 0.01);

        TimeSeries s(e);
        double worst = 0.0;
        for (std::size_t j = 1; j <= 5; ++j) worst = std::max(worst, std::abs(sample_autocorr(s, j)));
        CHECK(worst < 4.0 / std::sqrt(static_cast<double>(kMillion)));
    }
    CHECK_THROWS_AS((void)gen_innovations(InnovationKind::independent, 0, RngStream(1, 1)), DomainError);
}

TEST_CASE("fourth-order structure of the innovations") {
    auto lag_fourth = [](const std::vector<double>& e, int parity) {
        // mean of eps_i^2 eps_{i-1}^2 over absolute indices i (e[k] has index k + 1)
        double s = 0.0;
        std::size_t n = 0;
        for (std::size_t k = 1; k < e.size(); ++k) {
            if (parity >= 0 && static_cast<int>((k + 1) % 2) != parity) continue;
            s += e[k] * e[k] * e[k - 1] * e[k - 1];
            ++n;
        }
        return s / static_cast<double>(n);
    };
    const auto iid = gen_innovations(InnovationKind::independent, kMillion, RngStream(6, 0));
    CHECK(std::abs(lag_fourth(iid, -1) - 1.0) < 0.05);
    const auto prod = gen_innovations(InnovationKind::product_of_normals, kMillion, RngStream(6, 1));
    CHECK(std::abs(lag_fourth(prod, -1) - 3.0) < 0.15);
    const auto ns = gen_innovations(InnovationKind::non_stationary, kMillion, RngStream(6, 2));
    CHECK(std::abs(lag_fourth(ns, 1) - 3.0) < 0.15);  // odd i: e_i e_{i-1} after e_{i-1}
    CHECK(std::abs(lag_fourth(ns, 0) - 1.0) < 0.05);  // even i: e_i after e_{i-1} e_{i-2}

    SUBCASE("product innovations are built from consecutive latents") {
        RngStream latents(9, 9);
        const double e0 = latents.normal(), e1 = latents.normal(), e2 = latents.normal();
        const auto p = gen_innovations(InnovationKind::product_of_normals, 2, RngStream(9, 9));
        CHECK(p[0] == e1 * e0);
        CHECK(p[1] == e2 * e1);
        const auto n = gen_innovations(InnovationKind::non_stationary, 2, RngStream(9, 9));
        CHECK(n[0] == e1 * e0);
        CHECK(n[1] == e2);
        InnovationStream st(InnovationKind::independent, RngStream(9, 9));
        CHECK(st.next() == e1);
        CHECK(st.index() == 1);
    }
}

TEST_CASE("model coefficients") {
    CHECK(ar_coefficients(ModelKind::ar1, 0.3) == std::vector<double>{0.3});
    CHECK(ar_coefficients(ModelKind::ar2, 0.0) == std::vector<double>{0.5, 0.2});
    CHECK(ar_coefficients(ModelKind::ar4, 0.0) == std::vector<double>{0.3, 0.2, 0.2, 0.1});
    CHECK(ma_coefficients(ModelKind::ma3) == std::vector<double>{0.6, 0.4, 0.1});
    CHECK(ar_coefficients(ModelKind::ma3, 0.0).empty());
    CHECK(ma_coefficients(ModelKind::nlar2).empty());
}

TEST_CASE("DgpSpec validation") {
    DgpSpec s;
    CHECK_NOTHROW(s.validate());
    s.rho = 1.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s.model = ModelKind::ar2;
    CHECK_NOTHROW(s.validate());
    s.T = 9;
    CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("generated series") {
    SUBCASE("AR(1) autocovariances") {
        const auto x = make(ModelKind::ar1, InnovationKind::independent, 100000, 3, 0.7);
        for (std::size_t k = 0; k <= 3; ++k) {
            CHECK(std::abs(sample_autocov(x, k) - std::pow(0.7, k) / (1 - 0.49)) < 0.05);
        }
    }
    SUBCASE("MA(3) cuts off after lag 3") {
        for (auto kind : kAllInnovations) {
            const auto x = make(ModelKind::ma3, kind, 100000, 4);
            for (std::size_t k = 4; k <= 8; ++k) CHECK(std::abs(sample_autocov(x, k)) < 0.02);
            CHECK(std::abs(sample_autocov(x, 3) - 0.1) < 0.03);
        }
    }
    SUBCASE("nonlinear model is centered") {
        for (auto kind : kAllInnovations) {
            const auto x = make(ModelKind::nlar2, kind, 100000, 5);
            double m = 0.0;
            for (double v : x.values()) m += v;
            CHECK(std::abs(m / 100000.0) < 0.03);
        }
    }
    SUBCASE("determinism") {
        const auto a = make(ModelKind::ar4, InnovationKind::non_stationary, 500, 8);
        const auto b = make(ModelKind::ar4, InnovationKind::non_stationary, 500, 8);
        const auto c = make(ModelKind::ar4, InnovationKind::non_stationary, 500, 9);
        CHECK(as_vector(a) == as_vector(b));
        CHECK(as_vector(a) != as_vector(c));
        DgpSpec s;
        s.T = 50;
        s.stream = 1;
        const auto s1 = as_vector(gen_series(s));
        s.stream = 2;
        CHECK(as_vector(gen_series(s)) != s1);
    }
}

TEST_CASE("burn-in sufficiency") {
    for (auto model : {ModelKind::ar1, ModelKind::nlar2}) {
        int ok = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const auto a = make(model, InnovationKind::product_of_normals, 10000, seed, 0.9, 1000);
            const auto b = make(model, InnovationKind::product_of_normals, 10000, seed, 0.9, 2000);
            double worst = 0.0;
            for (std::size_t j = 0; j <= 4; ++j) {
                worst = std::max(worst, std::abs(sample_autocov(a, j) - sample_autocov(b, j)));
            }
            ok += worst < 0.02;
        }
        CHECK(ok >= 190);
    }
}

TEST_CASE("true parameters of the linear models") {
    auto t = true_parameters(ModelKind::ar1, 0.7, InnovationKind::independent, 4, 2);
    CHECK_FALSE(t.approximate);
    for (std::size_t k = 0; k <= 4; ++k) {
        CHECK(t.sigma[k] == doctest::Approx(std::pow(0.7, k) / 0.51).epsilon(1e-12));
        CHECK(t.rho[k] == doctest::Approx(std::pow(0.7, k)).epsilon(1e-12));
    }
    CHECK(t.a[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(std::abs(t.a[1]) < 1e-12);

    t = true_parameters(ModelKind::ma3, 0.0, InnovationKind::product_of_normals, 5, 1);
    const std::vector<double> ma{1.53, 0.88, 0.46, 0.1, 0.0, 0.0};
    for (std::size_t k = 0; k <= 5; ++k) CHECK(t.sigma[k] == doctest::Approx(ma[k]).epsilon(1e-12));
    CHECK(t.a[0] == doctest::Approx(0.88 / 1.53).epsilon(1e-12));

    t = true_parameters(ModelKind::ar2, 0.0, InnovationKind::independent, 7, 2);
    CHECK(t.rho[1] == doctest::Approx(0.5 / 0.8).epsilon(1e-12));
    CHECK(t.rho[2] == doctest::Approx(0.5 * 0.625 + 0.2).epsilon(1e-12));
    // Yule-Walker recovers the AR(2) coefficients; sigma_0 from the rho recursion
    CHECK(t.a[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(t.a[1] == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(t.sigma[0] == doctest::Approx(1.0 / (1 - 0.5 * t.rho[1] - 0.2 * t.rho[2])).epsilon(1e-10));

    t = true_parameters(ModelKind::ar4, 0.0, InnovationKind::non_stationary, 7, 4);
    const std::vector<double> ar4{0.3, 0.2, 0.2, 0.1};
    for (std::size_t k = 0; k < 4; ++k) CHECK(t.a[k] == doctest::Approx(ar4[k]).epsilon(1e-10));
    // the population autocovariances satisfy the AR(4) recursion beyond lag 4
    for (std::size_t h = 5; h <= 7; ++h) {
        double v = 0.0;
        for (std::size_t k = 0; k < 4; ++k) v += ar4[k] * t.sigma[h - k - 1];
        CHECK(t.sigma[h] == doctest::Approx(v).epsilon(1e-10));
    }

    CHECK(true_parameters(ModelKind::ar1, 0.5, InnovationKind::independent, 3, 0).a.empty());
}

TEST_CASE("true parameters of the nonlinear model") {
    const auto t = true_parameters(ModelKind::nlar2, 0.0, InnovationKind::independent, 4, 1);
    CHECK(t.approximate);
    CHECK(t.rho[0] == 1.0);
    const auto again = true_parameters(ModelKind::nlar2, 0.0, InnovationKind::independent, 4, 1);
    CHECK(again.sigma == t.sigma);
    // agrees with a shorter independent run
    const auto x = make(ModelKind::nlar2, InnovationKind::independent, 200000, 77);
    const TimeSeries c(as_vector(x), true);
    for (std::size_t k = 0; k <= 2; ++k) CHECK(std::abs(sample_autocov(c, k) - t.sigma[k]) < 0.03);
}
