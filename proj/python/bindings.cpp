#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "secondwild/bootstrap.hpp"
#include "secondwild/dgp.hpp"
#include "secondwild/errors.hpp"
#include "secondwild/hac.hpp"
#include "secondwild/harness.hpp"
#include "secondwild/kernel.hpp"
#include "secondwild/sieve.hpp"
#include "secondwild/version.hpp"
#include "secondwild/yule_walker.hpp"

namespace py = pybind11;
using namespace secondwild;

namespace {

const LagSet kDefaultH = {0, 1, 2, 3};
const LagSet kDefaultI = {1, 2, 3, 4};

BandwidthRule bandwidth_rule(std::optional<double> kt, double kt_c) {
    if (kt) return FixedBandwidth{*kt};
    return AutoBandwidth{kt_c};
}

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::object family(const std::optional<FamilyTest>& t) {
    if (!t) return py::none();
    py::dict d;
    d["statistic"] = t->statistic;
    d["critical"] = t->critical;
    d["reject"] = t->reject;
    d["p_value"] = t->p_value;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Second-order wild bootstrap for autocovariances, autocorrelations and AR coefficients";
    m.attr("__version__") = kVersion;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<DegenerateVarianceError>(m, "DegenerateVarianceError", PyExc_ArithmeticError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<SecondOrderEstimates>(m, "Estimates")
        .def_readonly("T", &SecondOrderEstimates::T)
        .def_readonly("d", &SecondOrderEstimates::d)
        .def_readonly("p", &SecondOrderEstimates::p)
        .def_readonly("sigma", &SecondOrderEstimates::sigma)
        .def_readonly("rho", &SecondOrderEstimates::rho)
        .def_readonly("a", &SecondOrderEstimates::a)
        .def_readonly("H", &SecondOrderEstimates::H)
        .def_readonly("I", &SecondOrderEstimates::I)
        .def_readonly("ar_pseudo_inverse", &SecondOrderEstimates::ar_pseudo_inverse);

    py::class_<Band>(m, "Band")
        .def_readonly("lag", &Band::lag)
        .def_readonly("estimate", &Band::estimate)
        .def_readonly("lower", &Band::lower)
        .def_readonly("upper", &Band::upper)
        .def("__repr__", [](const Band& b) {
            return "Band(lag=" + std::to_string(b.lag) + ", estimate=" + format_double(b.estimate) +
                   ", lower=" + format_double(b.lower) + ", upper=" + format_double(b.upper) + ")";
        });

    py::class_<InferenceReport>(m, "InferenceReport")
        .def_readonly("method", &InferenceReport::method)
        .def_readonly("estimates", &InferenceReport::estimates)
        .def_readonly("sigma_bands", &InferenceReport::sigma_bands)
        .def_readonly("rho_bands", &InferenceReport::rho_bands)
        .def_readonly("a_bands", &InferenceReport::a_bands)
        .def_readonly("radius_sigma", &InferenceReport::radius_sigma)
        .def_readonly("radius_rho", &InferenceReport::radius_rho)
        .def_readonly("radius_a", &InferenceReport::radius_a)
        .def_readonly("kernel", &InferenceReport::kernel)
        .def_readonly("bandwidth_rule", &InferenceReport::bandwidth_rule)
        .def_readonly("k_T", &InferenceReport::k_T)
        .def_readonly("q_hat", &InferenceReport::q_hat)
        .def_readonly("B", &InferenceReport::B)
        .def_readonly("alpha", &InferenceReport::alpha)
        .def_readonly("seed", &InferenceReport::seed)
        .def_readonly("degenerate_resamples", &InferenceReport::degenerate_resamples)
        .def_readonly("sieve_order", &InferenceReport::sieve_order);

    py::class_<BootstrapDraws>(m, "BootstrapDraws")
        .def_property_readonly("delta_sigma", [](const BootstrapDraws& d) { return to_array(d.delta_sigma); })
        .def_property_readonly("delta_rho", [](const BootstrapDraws& d) { return to_array(d.delta_rho); })
        .def_property_readonly("delta_a", [](const BootstrapDraws& d) { return to_array(d.delta_a); });

    m.def(
        "estimate_second_order",
        [](std::vector<double> x, std::size_t d, std::size_t p, LagSet H, LagSet I, bool center) {
            return estimate_second_order(TimeSeries(std::move(x), center), d, p, std::move(H), std::move(I));
        },
        py::arg("x"), py::arg("d") = 7, py::arg("p") = 1, py::arg("H") = kDefaultH, py::arg("I") = kDefaultI,
        py::arg("center") = false);

    m.def(
        "yule_walker",
        [](const std::vector<double>& sigma, std::size_t p) {
            const auto fit = yule_walker_fit(sigma, p);
            return py::make_tuple(fit.coefficients, fit.used_pseudo_inverse);
        },
        py::arg("sigma"), py::arg("p"), "Coefficients a_1..a_p and whether the pseudo-inverse was used.");

    m.def(
        "aic_order",
        [](const std::vector<double>& sigma, std::size_t T, std::size_t p_max) {
            return ar_order_select_aic(sigma, T, p_max).order;
        },
        py::arg("sigma"), py::arg("T"), py::arg("p_max"));

    m.def(
        "select_bandwidth",
        [](std::vector<double> x, double c) {
            const auto b = select_bandwidth(TimeSeries(std::move(x)), AutoBandwidth{c});
            return py::make_tuple(b.k_T, b.q_hat);
        },
        py::arg("x"), py::arg("c") = 2.0, "Flat-top rule; returns (k_T, q_hat).");

    m.def(
        "hac_cov",
        [](std::vector<double> x, const std::string& target, double bandwidth, std::size_t d, std::size_t p,
           LagSet H, LagSet I, bool center) {
            const TimeSeries ts(std::move(x), center);
            const auto est = estimate_second_order(ts, d, p, H, I);
            if (target == "autocovariance") return hac_autocov_cov(ts, est, H, KernelSpec{}, bandwidth).matrix;
            if (target == "autocorrelation") return hac_autocorr_cov(ts, est, I, KernelSpec{}, bandwidth).matrix;
            if (target == "ar_coefficients") return hac_arcoef_cov(ts, est, p, KernelSpec{}, bandwidth).matrix;
            throw DomainError("unknown target '" + target +
                              "' (autocovariance, autocorrelation, ar_coefficients)");
        },
        py::arg("x"), py::arg("target"), py::arg("bandwidth"), py::arg("d") = 7, py::arg("p") = 1,
        py::arg("H") = kDefaultH, py::arg("I") = kDefaultI, py::arg("center") = false);

    m.def(
        "bootstrap",
        [](std::vector<double> x, std::size_t d, std::size_t p, LagSet H, LagSet I, std::size_t B, double alpha,
           std::optional<double> kt, double kt_c, bool center, std::uint64_t seed, std::size_t threads) {
            BootstrapConfig cfg;
            cfg.d = d;
            cfg.p = p;
            cfg.H = std::move(H);
            cfg.I = std::move(I);
            cfg.B = B;
            cfg.alpha = alpha;
            cfg.bandwidth = bandwidth_rule(kt, kt_c);
            cfg.seed = seed;
            cfg.threads = threads;
            const TimeSeries ts(std::move(x), center);
            py::gil_scoped_release release;
            return run_bootstrap(ts, cfg);
        },
        py::arg("x"), py::arg("d") = 7, py::arg("p") = 1, py::arg("H") = kDefaultH, py::arg("I") = kDefaultI,
        py::arg("B") = 1000, py::arg("alpha") = 0.05, py::arg("kt") = py::none(), py::arg("kt_c") = 2.0,
        py::arg("center") = false, py::arg("seed") = 1, py::arg("threads") = 1,
        "Second-order wild bootstrap; returns (report, draws).");

    m.def(
        "sieve_bootstrap",
        [](std::vector<double> x, std::size_t d, std::size_t p, LagSet H, LagSet I, std::size_t B, double alpha,
           std::size_t p_max, std::size_t burn_in, bool center, std::uint64_t seed, std::size_t threads) {
            SieveConfig cfg;
            cfg.p_max = p_max;
            cfg.B = B;
            cfg.alpha = alpha;
            cfg.burn_in = burn_in;
            cfg.seed = seed;
            cfg.threads = threads;
            const TimeSeries ts(std::move(x), center);
            py::gil_scoped_release release;
            return ar_sieve_bootstrap(ts, d, p, H, I, cfg);
        },
        py::arg("x"), py::arg("d") = 7, py::arg("p") = 1, py::arg("H") = kDefaultH, py::arg("I") = kDefaultI,
        py::arg("B") = 1000, py::arg("alpha") = 0.05, py::arg("p_max") = 7, py::arg("burn_in") = 1000,
        py::arg("center") = false, py::arg("seed") = 1, py::arg("threads") = 1);

    m.def(
        "hypothesis_tests",
        [](const InferenceReport& report, const BootstrapDraws& draws, std::optional<std::vector<double>> sigma,
           std::optional<std::vector<double>> rho, std::optional<std::vector<double>> a) {
            const auto t = hypothesis_tests(report, draws, sigma, rho, a);
            py::dict d;
            d["autocovariance"] = family(t.sigma);
            d["autocorrelation"] = family(t.rho);
            d["ar_coefficients"] = family(t.a);
            return d;
        },
        py::arg("report"), py::arg("draws"), py::arg("sigma") = py::none(), py::arg("rho") = py::none(),
        py::arg("a") = py::none());

    m.def(
        "plugin_radii",
        [](std::vector<double> x, double bandwidth, std::size_t d, std::size_t p, LagSet H, LagSet I,
           double alpha, std::size_t n_mc, std::uint64_t seed) {
            const TimeSeries ts(std::move(x));
            const auto est = estimate_second_order(ts, d, p, H, I);
            const auto r = plugin_radii(ts, est, KernelSpec{}, bandwidth, alpha, n_mc, seed);
            py::dict out;
            out["autocovariance"] = r.sigma;
            out["autocorrelation"] = r.rho;
            out["ar_coefficients"] = r.a;
            return out;
        },
        py::arg("x"), py::arg("bandwidth"), py::arg("d") = 7, py::arg("p") = 1, py::arg("H") = kDefaultH,
        py::arg("I") = kDefaultI, py::arg("alpha") = 0.05, py::arg("n_mc") = 100000, py::arg("seed") = 1,
        "Radii from HAC covariances and the Monte Carlo Gaussian-max quantile.");

    m.def(
        "gaussian_max_quantile",
        [](const Eigen::MatrixXd& cov, double alpha, std::size_t n_mc, std::uint64_t seed, std::uint64_t stream) {
            RngStream s(seed, stream);
            return gaussian_max_quantile(cov, alpha, n_mc, s);
        },
        py::arg("cov"), py::arg("alpha") = 0.05, py::arg("n_mc") = 100000, py::arg("seed") = 1,
        py::arg("stream") = 0);

    m.def(
        "simulate",
        [](const std::string& model, const std::string& innovation, std::size_t T, double rho,
           std::size_t burn_in, std::uint64_t seed, std::uint64_t stream) {
            DgpSpec s;
            s.model = parse_model(model);
            s.innovation = parse_innovation(innovation);
            s.T = T;
            s.rho = rho;
            s.burn_in = burn_in;
            s.seed = seed;
            s.stream = stream;
            const auto x = gen_series(s);
            return to_array({x.values().begin(), x.values().end()});
        },
        py::arg("model") = "ar1", py::arg("innovation") = "independent", py::arg("T") = 1000,
        py::arg("rho") = 0.9, py::arg("burn_in") = 1000, py::arg("seed") = 1, py::arg("stream") = 0);

    m.def(
        "true_parameters",
        [](const std::string& model, const std::string& innovation, std::size_t d, std::size_t p, double rho) {
            TrueParameters t;
            {
                py::gil_scoped_release release;
                t = true_parameters(parse_model(model), rho, parse_innovation(innovation), d, p);
            }
            py::dict out;
            out["sigma"] = t.sigma;
            out["rho"] = t.rho;
            out["a"] = t.a;
            out["approximate"] = t.approximate;
            return out;
        },
        py::arg("model"), py::arg("innovation") = "independent", py::arg("d") = 7, py::arg("p") = 1,
        py::arg("rho") = 0.9);

    m.def(
        "example1",
        [](std::size_t n, std::size_t reps, std::uint64_t seed, std::size_t threads) {
            VarianceStudyReport r;
            {
                py::gil_scoped_release release;
                r = example1_variance_study(n, reps, seed, threads);
            }
            py::list rows;
            for (const auto& row : r.rows) {
                py::dict d;
                d["innovation"] = innovation_name(row.innovation);
                d["n"] = row.n;
                d["reps"] = row.reps;
                d["mean_rho"] = row.mean_rho;
                d["var_rho"] = row.var_rho;
                d["mean_gamma1"] = row.mean_gamma;
                d["var_gamma1"] = row.var_gamma;
                rows.append(d);
            }
            return rows;
        },
        py::arg("n") = 10000, py::arg("reps") = 2000, py::arg("seed") = 1, py::arg("threads") = 1);

    m.def(
        "coverage",
        [](const std::vector<std::string>& scenarios, const std::vector<std::string>& methods, std::size_t T,
           std::size_t reps, std::size_t B, double alpha, std::size_t d, LagSet H, LagSet I,
           std::optional<std::size_t> p, std::optional<double> kt, double rho, std::uint64_t seed,
           std::size_t threads) {
            CoverageConfig cfg;
            for (const auto& name : scenarios) {
                auto s = parse_scenario(name);
                s.rho = rho;
                cfg.scenarios.push_back(s);
            }
            cfg.methods.clear();
            for (const auto& name : methods) cfg.methods.push_back(parse_method(name));
            cfg.T = T;
            cfg.reps = reps;
            cfg.B = B;
            cfg.alpha = alpha;
            cfg.d = d;
            cfg.H = std::move(H);
            cfg.I = std::move(I);
            cfg.p = p;
            cfg.bandwidth = bandwidth_rule(kt, 2.0);
            cfg.seed = seed;
            cfg.threads = threads;
            CoverageReport r;
            {
                py::gil_scoped_release release;
                r = coverage_study(cfg);
            }
            py::list rows;
            for (const auto& row : r.rows) {
                py::dict o;
                o["model"] = row.model;
                o["innovation"] = row.innovation;
                o["target"] = row.target;
                o["method"] = row.method;
                o["order"] = row.order;
                o["mean_k_T"] = row.mean_k_T;
                o["coverage"] = row.coverage;
                o["se"] = row.se;
                o["reps"] = row.reps;
                o["T"] = row.T;
                o["truth_approximate"] = row.truth_approximate;
                rows.append(o);
            }
            return rows;
        },
        py::arg("scenarios"), py::arg("methods") = std::vector<std::string>{"wild", "sieve"},
        py::arg("T") = 1000, py::arg("reps") = 2000, py::arg("B") = 0, py::arg("alpha") = 0.05,
        py::arg("d") = 7, py::arg("H") = kDefaultH, py::arg("I") = kDefaultI, py::arg("p") = py::none(),
        py::arg("kt") = py::none(), py::arg("rho") = 0.9, py::arg("seed") = 1, py::arg("threads") = 1,
        "Monte Carlo coverage; B = 0 is warp-speed.");

    m.def(
        "approx_check",
        [](const std::string& scenario, double rho, std::size_t T, std::size_t reps, std::size_t oracle_length,
           std::size_t n_mc, std::uint64_t seed, std::size_t threads) {
            ApproxCheckConfig cfg;
            cfg.scenario = parse_scenario(scenario);
            cfg.scenario.rho = rho;
            cfg.T = T;
            cfg.reps = reps;
            cfg.oracle_length = oracle_length;
            cfg.n_mc = n_mc;
            cfg.seed = seed;
            cfg.threads = threads;
            ApproxCheckReport r;
            {
                py::gil_scoped_release release;
                r = gaussian_approx_check(cfg);
            }
            py::dict o;
            o["scenario"] = r.scenario;
            o["T"] = r.T;
            o["reps"] = r.reps;
            o["oracle_k_T"] = r.oracle_k_T;
            o["ks_distance"] = r.ks_distance;
            return o;
        },
        py::arg("scenario") = "ar1:independent", py::arg("rho") = 0.7, py::arg("T") = 2000,
        py::arg("reps") = 2000, py::arg("oracle_length") = 1000000, py::arg("n_mc") = 100000,
        py::arg("seed") = 1, py::arg("threads") = 1);
}
