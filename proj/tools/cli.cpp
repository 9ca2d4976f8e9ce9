#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "report_json.hpp"
#include "secondwild/bootstrap.hpp"
#include "secondwild/dgp.hpp"
#include "secondwild/harness.hpp"
#include "secondwild/parallel.hpp"
#include "secondwild/sieve.hpp"
#include "secondwild/version.hpp"
#include "secondwild/yule_walker.hpp"

namespace fs = std::filesystem;

namespace secondwild::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& v) {
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    return ec == std::errc() && ptr == last;
}

// Canonical argument list and the matching manifest flags, built together so
// a replay reproduces the manifest exactly.
class Recorder {
public:
    explicit Recorder(std::string subcommand) : args_{std::move(subcommand)} {}

    void positional(const std::string& key, const std::string& value) {
        args_.push_back(value);
        flags_[key] = value;
    }
    void option(const std::string& name, const std::string& value) {
        args_.push_back("--" + name);
        args_.push_back(value);
        flags_[name] = value;
    }
    void option(const std::string& name, double value) {
        args_.push_back("--" + name);
        args_.push_back(format_double(value));
        flags_[name] = value;
    }
    void option(const std::string& name, std::size_t value) {
        args_.push_back("--" + name);
        args_.push_back(std::to_string(value));
        flags_[name] = value;
    }
    void option_u64(const std::string& name, std::uint64_t value) {
        args_.push_back("--" + name);
        args_.push_back(std::to_string(value));
        flags_[name] = value;
    }
    void repeated(const std::string& name, const std::vector<std::string>& values) {
        for (const auto& v : values) {
            args_.push_back("--" + name);
            args_.push_back(v);
        }
        flags_[name] = values;
    }
    void flag(const std::string& name, bool on) {
        if (on) args_.push_back("--" + name);
        flags_[name] = on;
    }

    [[nodiscard]] ordered_json manifest(std::uint64_t seed, const ordered_json& resolved) const {
        ordered_json m;
        m["tool"] = "secondwild";
        m["version"] = kVersion;
        m["subcommand"] = args_.front();
        m["seed"] = seed;
        m["flags"] = flags_;
        m["resolved"] = resolved;
        m["args"] = args_;
        return m;
    }

private:
    std::vector<std::string> args_;
    ordered_json flags_ = ordered_json::object();
};

struct RunContext {
    std::ostream& out;
    std::ostream& err;
    std::string out_dir;  ///< empty: stdout only
    std::size_t threads = 1;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path.string());
    f << content;
}

std::string csv_with_manifest(const ordered_json& manifest, const std::string& body) {
    return "# manifest " + manifest.dump() + "\n" + body;
}

std::string json_with_manifest(const ordered_json& manifest, const char* key, const ordered_json& body) {
    ordered_json doc;
    doc["manifest"] = manifest;
    doc[key] = body;
    return doc.dump(2) + "\n";
}

// Writes the named files (plus manifest.json) into the output directory.
void emit(const RunContext& ctx, const ordered_json& manifest,
          const std::vector<std::pair<std::string, std::string>>& files) {
    if (ctx.out_dir.empty()) return;
    fs::create_directories(ctx.out_dir);
    for (const auto& [name, content] : files) write_file(fs::path(ctx.out_dir) / name, content);
    write_file(fs::path(ctx.out_dir) / "manifest.json", manifest.dump(2) + "\n");
}

void write_timing(const RunContext& ctx, const std::string& started, double seconds) {
    ctx.err << "elapsed: " << std::fixed << std::setprecision(3) << seconds << " s (threads "
            << ctx.threads << ")\n";
    ctx.err.unsetf(std::ios::floatfield);
    if (ctx.out_dir.empty()) return;
    ordered_json t{{"started", started}, {"elapsed_seconds", seconds}, {"threads", ctx.threads}};
    write_file(fs::path(ctx.out_dir) / "timing.json", t.dump(2) + "\n");
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---- analyze / test ----

struct AnalyzeOptions {
    std::string input;
    std::size_t d = 7;
    std::size_t p = 1;
    bool p_auto = false;
    std::string H = "0-3";
    std::string I = "1-4";
    double alpha = 0.05;
    std::size_t B = 1000;
    std::string kernel = "gaussian";
    std::optional<double> kt;
    bool kt_auto = false;
    double kt_c = 2.0;
    bool center = false;
    std::string method = "wild";
    std::size_t sieve_pmax = 7;
    std::size_t burn_in = 1000;
    std::uint64_t seed = 1;
    // test only
    std::string hypothesis;
    bool null_zero = false;
};

void add_analyze_options(CLI::App* sub, AnalyzeOptions& o) {
    sub->add_option("input", o.input, "Series file, one value per line")->required();
    sub->add_option("--d", o.d, "Max lag d")->capture_default_str();
    auto* p = sub->add_option("--p", o.p, "AR order p (0 disables the AR family)")->capture_default_str();
    sub->add_flag("--p-auto", o.p_auto, "Select p by AIC over 0..d")->excludes(p);
    sub->add_option("--H", o.H, "Autocovariance lags, e.g. 0-3")->capture_default_str();
    sub->add_option("--I", o.I, "Autocorrelation lags, e.g. 1-4")->capture_default_str();
    sub->add_option("--alpha", o.alpha, "Nominal level")->capture_default_str();
    sub->add_option("--B", o.B, "Bootstrap replicates")->capture_default_str();
    sub->add_option("--kernel", o.kernel, "Multiplier kernel")->capture_default_str();
    auto* kt = sub->add_option("--kt", o.kt, "Fixed bandwidth k_T");
    sub->add_flag("--kt-auto", o.kt_auto, "Flat-top automatic bandwidth (default)")->excludes(kt);
    sub->add_option("--kt-c", o.kt_c, "Threshold constant of the automatic bandwidth")->capture_default_str();
    sub->add_flag("--center", o.center, "Subtract the sample mean first");
    sub->add_option("--method", o.method, "wild or sieve")
        ->check(CLI::IsMember({"wild", "sieve"}))
        ->capture_default_str();
    sub->add_option("--sieve-pmax", o.sieve_pmax, "AIC range of the sieve")->capture_default_str();
    sub->add_option("--burn-in", o.burn_in, "Sieve burn-in")->capture_default_str();
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void record_analyze(Recorder& rec, const AnalyzeOptions& o, bool is_test) {
    rec.positional("input", fs::absolute(o.input).lexically_normal().string());
    rec.option("d", o.d);
    if (o.p_auto) {
        rec.flag("p-auto", true);
    } else {
        rec.option("p", o.p);
    }
    rec.option("H", format_lag_set(parse_lag_set(o.H)));
    rec.option("I", format_lag_set(parse_lag_set(o.I)));
    rec.option("alpha", o.alpha);
    rec.option("B", o.B);
    rec.option("kernel", o.kernel);
    if (o.kt) {
        rec.option("kt", *o.kt);
    } else {
        rec.flag("kt-auto", true);
        rec.option("kt-c", o.kt_c);
    }
    rec.flag("center", o.center);
    rec.option("method", o.method);
    if (o.method == "sieve") {
        rec.option("sieve-pmax", o.sieve_pmax);
        rec.option("burn-in", o.burn_in);
    }
    rec.option_u64("seed", o.seed);
    if (is_test) {
        if (o.null_zero) {
            rec.flag("null-zero", true);
        } else {
            rec.option("hypothesis", fs::absolute(o.hypothesis).lexically_normal().string());
        }
    }
}

struct AnalysisResult {
    InferenceReport report;
    BootstrapDraws draws;
    ordered_json resolved;
};

AnalysisResult run_analysis(const AnalyzeOptions& o, const RunContext& ctx) {
    TimeSeries x(read_series_file(o.input), o.center);
    std::size_t p = o.p;
    ordered_json resolved;
    resolved["T"] = x.size();
    if (o.p_auto) {
        const auto sigma = sample_autocovs(x.values(), o.d);
        if (!(sigma[0] > 0.0)) throw DegenerateVarianceError("sample variance is zero");
        p = ar_order_select_aic(sigma, x.size(), o.d).order;
    }
    resolved["p"] = p;
    const LagSet H = parse_lag_set(o.H);
    const LagSet I = parse_lag_set(o.I);
    AnalysisResult r;
    if (o.method == "sieve") {
        SieveConfig sc;
        sc.p_max = o.sieve_pmax;
        sc.B = o.B;
        sc.alpha = o.alpha;
        sc.seed = o.seed;
        sc.burn_in = o.burn_in;
        sc.threads = ctx.threads;
        BootstrapConfig probe;  // same lag-set and order validation as the wild path
        probe.d = o.d;
        probe.p = p;
        probe.H = H;
        probe.I = I;
        probe.alpha = o.alpha;
        probe.B = o.B;
        probe.validate();
        auto [rep, draws] = ar_sieve_bootstrap(x, o.d, p, H, I, sc);
        r.report = std::move(rep);
        r.draws = std::move(draws);
        resolved["sieve_order"] = r.report.sieve_order;
    } else {
        BootstrapConfig bc;
        bc.d = o.d;
        bc.p = p;
        bc.H = H;
        bc.I = I;
        bc.kernel = KernelSpec{parse_kernel(o.kernel)};
        if (o.kt) {
            bc.bandwidth = FixedBandwidth{*o.kt};
        } else {
            bc.bandwidth = AutoBandwidth{o.kt_c};
        }
        bc.B = o.B;
        bc.alpha = o.alpha;
        bc.seed = o.seed;
        bc.threads = ctx.threads;
        auto [rep, draws] = run_bootstrap(x, bc);
        r.report = std::move(rep);
        r.draws = std::move(draws);
        resolved["k_T"] = r.report.k_T;
        resolved["q_hat"] = r.report.q_hat ? ordered_json(*r.report.q_hat) : ordered_json(nullptr);
    }
    r.resolved = resolved;
    return r;
}

std::string fmt(double v, int width = 12, int prec = 6) {
    std::ostringstream os;
    os << std::setw(width) << std::fixed << std::setprecision(prec) << v;
    return os.str();
}

void print_report_table(std::ostream& os, const InferenceReport& r) {
    const auto& e = r.estimates;
    os << "method " << r.method << "  T = " << e.T << "  d = " << e.d << "  p = " << e.p;
    if (r.method == "wild") {
        os << "  k_T = " << r.k_T << " (" << r.bandwidth_rule;
        if (r.q_hat) os << ", q_hat = " << *r.q_hat;
        os << ")";
    } else {
        os << "  sieve order = " << r.sieve_order;
    }
    os << "  B = " << r.B << "  alpha = " << r.alpha << "\n";
    os << std::left << std::setw(18) << "family" << std::right << std::setw(5) << "lag"
       << std::setw(12) << "estimate" << std::setw(12) << "lower" << std::setw(12) << "upper" << "\n";
    auto rows = [&](const char* name, const std::vector<Band>& bands) {
        for (const auto& b : bands) {
            os << std::left << std::setw(18) << name << std::right << std::setw(5) << b.lag
               << fmt(b.estimate) << fmt(b.lower) << fmt(b.upper) << "\n";
        }
    };
    rows("autocovariance", r.sigma_bands);
    rows("autocorrelation", r.rho_bands);
    rows("ar_coefficients", r.a_bands);
    os << "radius (sqrt(T) scale): sigma " << fmt(r.radius_sigma, 0, 4) << "  rho "
       << fmt(r.radius_rho, 0, 4);
    if (e.p > 0) os << "  a " << fmt(r.radius_a, 0, 4);
    os << "\n";
}

std::string bands_csv(const InferenceReport& r) {
    std::string s = "family,lag,estimate,lower,upper\n";
    auto rows = [&](const char* name, const std::vector<Band>& bands) {
        for (const auto& b : bands) {
            s += std::string(name) + "," + std::to_string(b.lag) + "," + format_double(b.estimate) +
                 "," + format_double(b.lower) + "," + format_double(b.upper) + "\n";
        }
    };
    rows("autocovariance", r.sigma_bands);
    rows("autocorrelation", r.rho_bands);
    rows("ar_coefficients", r.a_bands);
    return s;
}

int cmd_analyze(const AnalyzeOptions& o, const RunContext& ctx) {
    Recorder rec("analyze");
    record_analyze(rec, o, false);
    const auto result = run_analysis(o, ctx);
    const auto manifest = rec.manifest(o.seed, result.resolved);
    print_report_table(ctx.out, result.report);
    emit(ctx, manifest,
         {{"report.json", json_with_manifest(manifest, "report", to_json(result.report))},
          {"bands.csv", csv_with_manifest(manifest, bands_csv(result.report))}});
    return kExitOk;
}

std::optional<std::vector<double>> json_vector(const ordered_json& doc, const char* key) {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    return doc[key].get<std::vector<double>>();
}

int cmd_test(const AnalyzeOptions& o, const RunContext& ctx) {
    if (o.null_zero == !o.hypothesis.empty()) {
        throw DomainError("test: give exactly one of --hypothesis FILE or --null-zero");
    }
    Recorder rec("test");
    record_analyze(rec, o, true);
    const auto result = run_analysis(o, ctx);
    const auto& est = result.report.estimates;
    std::optional<std::vector<double>> sigma_e, rho_e, a_e;
    if (o.null_zero) {
        // sigma_0 > 0 always, so the zero null on autocovariances only makes sense without lag 0
        if (std::find(est.H.begin(), est.H.end(), 0) == est.H.end()) {
            sigma_e = std::vector<double>(est.H.size(), 0.0);
        }
        rho_e = std::vector<double>(est.I.size(), 0.0);
        if (est.p > 0) a_e = std::vector<double>(est.p, 0.0);
    } else {
        std::ifstream f(o.hypothesis);
        if (!f) throw InputError("cannot open hypothesis file " + o.hypothesis);
        ordered_json doc;
        try {
            doc = ordered_json::parse(f);
        } catch (const nlohmann::json::exception& e) {
            throw InputError("hypothesis file " + o.hypothesis + ": " + e.what());
        }
        sigma_e = json_vector(doc, "sigma");
        rho_e = json_vector(doc, "rho");
        a_e = json_vector(doc, "a");
    }
    const auto tests = hypothesis_tests(result.report, result.draws, sigma_e, rho_e, a_e);
    const auto manifest = rec.manifest(o.seed, result.resolved);

    ctx.out << std::left << std::setw(18) << "family" << std::right << std::setw(12) << "statistic"
            << std::setw(12) << "critical" << std::setw(10) << "p-value" << "  decision\n";
    auto line = [&](const char* name, const std::optional<FamilyTest>& t) {
        if (!t) return;
        ctx.out << std::left << std::setw(18) << name << std::right << fmt(t->statistic)
                << fmt(t->critical) << fmt(t->p_value, 10, 4) << "  " << (t->reject ? "reject" : "accept")
                << "\n";
    };
    line("autocovariance", tests.sigma);
    line("autocorrelation", tests.rho);
    line("ar_coefficients", tests.a);

    ordered_json body{{"tests", to_json(tests)}, {"report", to_json(result.report)}};
    std::string csv = "family,statistic,critical,p_value,reject\n";
    auto csv_line = [&](const char* name, const std::optional<FamilyTest>& t) {
        if (!t) return;
        csv += std::string(name) + "," + format_double(t->statistic) + "," + format_double(t->critical) +
               "," + format_double(t->p_value) + "," + (t->reject ? "1" : "0") + "\n";
    };
    csv_line("autocovariance", tests.sigma);
    csv_line("autocorrelation", tests.rho);
    csv_line("ar_coefficients", tests.a);
    emit(ctx, manifest,
         {{"decisions.json", json_with_manifest(manifest, "decisions", body)},
          {"decisions.csv", csv_with_manifest(manifest, csv)}});
    return kExitOk;
}

// ---- simulate ----

struct SimulateOptions {
    std::string model = "ar1";
    double rho = 0.9;
    std::string innovation = "independent";
    std::size_t T = 1000;
    std::size_t burn_in = 1000;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
};

int cmd_simulate(const SimulateOptions& o, const RunContext& ctx) {
    DgpSpec spec;
    spec.model = parse_model(o.model);
    spec.rho = o.rho;
    spec.innovation = parse_innovation(o.innovation);
    spec.T = o.T;
    spec.burn_in = o.burn_in;
    spec.seed = o.seed;
    spec.stream = o.stream;
    Recorder rec("simulate");
    rec.option("model", model_name(spec.model));
    if (spec.model == ModelKind::ar1) rec.option("rho", o.rho);
    rec.option("innovation", innovation_name(spec.innovation));
    rec.option("T", o.T);
    rec.option("burn-in", o.burn_in);
    rec.option_u64("seed", o.seed);
    rec.option_u64("stream", o.stream);
    const auto x = gen_series(spec);
    const auto manifest = rec.manifest(o.seed, ordered_json::object());
    std::string body = "x\n";
    for (double v : x.values()) body += format_double(v) + "\n";
    const auto csv = csv_with_manifest(manifest, body);
    if (ctx.out_dir.empty()) {
        ctx.out << csv;
    } else {
        emit(ctx, manifest, {{"series.csv", csv}});
        ctx.err << "wrote " << (fs::path(ctx.out_dir) / "series.csv").string() << " (" << x.size()
                << " values)\n";
    }
    return kExitOk;
}

// ---- example1 ----

struct Example1Options {
    std::size_t n = 10000;
    std::size_t reps = 2000;
    std::uint64_t seed = 1;
};

int cmd_example1(const Example1Options& o, const RunContext& ctx) {
    Recorder rec("example1");
    rec.option("n", o.n);
    rec.option("reps", o.reps);
    rec.option_u64("seed", o.seed);
    const auto report = example1_variance_study(o.n, o.reps, o.seed, ctx.threads);
    const auto manifest = rec.manifest(o.seed, {{"rho", report.rho}, {"gamma1", report.gamma1}});
    std::ostringstream csv;
    write_variance_csv(csv, report);
    const auto text = csv_with_manifest(manifest, csv.str());
    ctx.out << text;
    emit(ctx, manifest,
         {{"example1.csv", text}, {"example1.json", json_with_manifest(manifest, "example1", to_json(report))}});
    return kExitOk;
}

// ---- coverage ----

struct CoverageOptions {
    std::vector<std::string> scenarios;
    std::string method = "both";
    std::size_t T = 1000;
    std::size_t reps = 2000;
    std::size_t B = 0;
    double alpha = 0.05;
    std::size_t d = 7;
    std::string H = "0-3";
    std::string I = "1-4";
    std::optional<std::size_t> p;
    std::optional<double> kt;
    double kt_c = 2.0;
    std::size_t sieve_pmax = 7;
    std::size_t burn_in = 1000;
    double rho = 0.9;
    std::uint64_t seed = 1;
};

int cmd_coverage(const CoverageOptions& o, const RunContext& ctx) {
    CoverageConfig cfg;
    std::vector<std::string> names = o.scenarios;
    if (names.empty() || (names.size() == 1 && names[0] == "all")) {
        names.clear();
        for (const auto& s : all_scenarios()) names.push_back(s.name());
    }
    for (const auto& n : names) {
        auto s = parse_scenario(n);
        s.rho = o.rho;
        cfg.scenarios.push_back(s);
    }
    if (o.method == "both") {
        cfg.methods = {CoverageMethod::wild, CoverageMethod::sieve};
    } else {
        cfg.methods = {parse_method(o.method)};
    }
    cfg.T = o.T;
    cfg.reps = o.reps;
    cfg.B = o.B;
    cfg.alpha = o.alpha;
    cfg.d = o.d;
    cfg.H = parse_lag_set(o.H);
    cfg.I = parse_lag_set(o.I);
    cfg.p = o.p;
    if (o.kt) {
        cfg.bandwidth = FixedBandwidth{*o.kt};
    } else {
        cfg.bandwidth = AutoBandwidth{o.kt_c};
    }
    cfg.sieve_p_max = o.sieve_pmax;
    cfg.burn_in = o.burn_in;
    cfg.seed = o.seed;
    cfg.threads = ctx.threads;

    Recorder rec("coverage");
    std::vector<std::string> canonical;
    for (const auto& s : cfg.scenarios) canonical.push_back(s.name());
    rec.repeated("scenario", canonical);
    rec.option("method", o.method);
    rec.option("T", o.T);
    rec.option("reps", o.reps);
    rec.option("B", o.B);
    rec.option("alpha", o.alpha);
    rec.option("d", o.d);
    rec.option("H", format_lag_set(cfg.H));
    rec.option("I", format_lag_set(cfg.I));
    if (o.p) rec.option("p", *o.p);
    if (o.kt) {
        rec.option("kt", *o.kt);
    } else {
        rec.option("kt-c", o.kt_c);
    }
    rec.option("sieve-pmax", o.sieve_pmax);
    rec.option("burn-in", o.burn_in);
    rec.option("rho", o.rho);
    rec.option_u64("seed", o.seed);

    const auto report = coverage_study(cfg);
    ordered_json resolved{{"mode", cfg.warp_speed() ? "warp-speed" : "full"},
                          {"scenarios", names}};
    const auto manifest = rec.manifest(o.seed, resolved);
    std::ostringstream csv;
    write_coverage_csv(csv, report);
    const auto text = csv_with_manifest(manifest, csv.str());
    ctx.out << text;
    emit(ctx, manifest,
         {{"coverage.csv", text}, {"coverage.json", json_with_manifest(manifest, "coverage", to_json(report))}});
    return kExitOk;
}

// ---- approx-check ----

struct ApproxOptions {
    std::string scenario = "ar1:independent";
    double rho = 0.7;
    std::size_t T = 2000;
    std::size_t reps = 2000;
    std::string H = "0-3";
    std::size_t oracle_length = 1'000'000;
    std::size_t n_mc = 100'000;
    std::size_t burn_in = 1000;
    std::uint64_t seed = 1;
};

int cmd_approx(const ApproxOptions& o, const RunContext& ctx) {
    ApproxCheckConfig cfg;
    cfg.scenario = parse_scenario(o.scenario);
    cfg.scenario.rho = o.rho;
    cfg.T = o.T;
    cfg.reps = o.reps;
    cfg.H = parse_lag_set(o.H);
    cfg.oracle_length = o.oracle_length;
    cfg.n_mc = o.n_mc;
    cfg.burn_in = o.burn_in;
    cfg.seed = o.seed;
    cfg.threads = ctx.threads;
    Recorder rec("approx-check");
    rec.option("scenario", cfg.scenario.name());
    rec.option("rho", o.rho);
    rec.option("T", o.T);
    rec.option("reps", o.reps);
    rec.option("H", format_lag_set(cfg.H));
    rec.option("oracle-length", o.oracle_length);
    rec.option("nmc", o.n_mc);
    rec.option("burn-in", o.burn_in);
    rec.option_u64("seed", o.seed);
    const auto report = gaussian_approx_check(cfg);
    const auto manifest = rec.manifest(o.seed, {{"oracle_k_T", report.oracle_k_T}});
    std::ostringstream csv;
    write_approx_csv(csv, report);
    const auto text = csv_with_manifest(manifest, csv.str());
    ctx.out << text;
    emit(ctx, manifest,
         {{"approx.csv", text}, {"approx.json", json_with_manifest(manifest, "approx_check", to_json(report))}});
    return kExitOk;
}

// Reads a manifest (or any output JSON embedding one) and returns its canonical args.
std::vector<std::string> replay_args(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open manifest " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("manifest " + path + ": " + e.what());
    }
    const auto& m = doc.contains("manifest") ? doc["manifest"] : doc;
    if (!m.contains("args") || !m["args"].is_array()) throw InputError("manifest " + path + " has no args");
    return m["args"].get<std::vector<std::string>>();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
    CLI::App app{"Second-order wild bootstrap inference for autocovariances, autocorrelations and AR coefficients",
                 "secondwild"};
    app.set_version_flag("--version", kVersion);
    std::string replay;
    std::size_t threads = 0;
    std::string out_dir;
    app.add_option("--replay", replay, "Rerun the command recorded in a manifest (or output JSON)");
    app.add_option("--threads", threads, "Worker threads for --replay (0: SECONDWILD_THREADS, else 1)");
    app.add_option("--out", out_dir, "Output directory for --replay");
    app.require_subcommand(0, 1);

    AnalyzeOptions analyze_opts, test_opts;
    SimulateOptions sim_opts;
    Example1Options ex1_opts;
    CoverageOptions cov_opts;
    ApproxOptions approx_opts;
    std::size_t sub_threads = 0;
    std::string sub_out;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", sub_threads,
                        "Worker threads (0: SECONDWILD_THREADS, else 1); output does not depend on it");
        sub->add_option("--out", sub_out, "Output directory");
    };

    auto* analyze = app.add_subcommand("analyze", "Simultaneous bands for a series");
    add_analyze_options(analyze, analyze_opts);
    add_common(analyze);

    auto* test = app.add_subcommand("test", "Max-type tests of hypothesized second-order values");
    add_analyze_options(test, test_opts);
    test->add_option("--hypothesis", test_opts.hypothesis, "JSON file with optional sigma, rho, a arrays");
    test->add_flag("--null-zero", test_opts.null_zero, "Test rho = 0, a = 0 (and sigma = 0 when 0 is not in H)");
    add_common(test);

    auto* simulate = app.add_subcommand("simulate", "Generate a series from a built-in model");
    simulate->add_option("--model", sim_opts.model, "ar1, ar2, ar4, ma3, nlar2")->capture_default_str();
    simulate->add_option("--rho", sim_opts.rho, "AR(1) coefficient")->capture_default_str();
    simulate->add_option("--innovation", sim_opts.innovation, "independent, product, nonstationary")
        ->capture_default_str();
    simulate->add_option("--T", sim_opts.T, "Length")->capture_default_str();
    simulate->add_option("--burn-in", sim_opts.burn_in, "Discarded initial steps")->capture_default_str();
    simulate->add_option("--seed", sim_opts.seed, "Random seed")->capture_default_str();
    simulate->add_option("--stream", sim_opts.stream, "Stream index")->capture_default_str();
    add_common(simulate);

    auto* example1 = app.add_subcommand("example1", "Variance of the Yule-Walker estimator under AR(1)");
    example1->add_option("--n", ex1_opts.n, "Series length")->capture_default_str();
    example1->add_option("--reps", ex1_opts.reps, "Replications")->capture_default_str();
    example1->add_option("--seed", ex1_opts.seed, "Random seed")->capture_default_str();
    add_common(example1);

    auto* coverage = app.add_subcommand("coverage", "Coverage of the simultaneous bands");
    coverage->add_option("--scenario", cov_opts.scenarios, "model:innovation, repeatable, or all");
    coverage->add_option("--method", cov_opts.method, "wild, sieve or both")
        ->check(CLI::IsMember({"wild", "sieve", "both"}))
        ->capture_default_str();
    coverage->add_option("--T", cov_opts.T, "Series length")->capture_default_str();
    coverage->add_option("--reps", cov_opts.reps, "Replications")->capture_default_str();
    coverage->add_option("--B", cov_opts.B, "Replicates per rep; 0 is warp-speed")->capture_default_str();
    coverage->add_option("--alpha", cov_opts.alpha, "Nominal level")->capture_default_str();
    coverage->add_option("--d", cov_opts.d, "Max lag d")->capture_default_str();
    coverage->add_option("--H", cov_opts.H, "Autocovariance lags")->capture_default_str();
    coverage->add_option("--I", cov_opts.I, "Autocorrelation lags")->capture_default_str();
    coverage->add_option("--p", cov_opts.p, "AR order (default: modal AIC order of pilot series)");
    coverage->add_option("--kt", cov_opts.kt, "Fixed bandwidth (default automatic)");
    coverage->add_option("--kt-c", cov_opts.kt_c, "Threshold constant of the automatic bandwidth")
        ->capture_default_str();
    coverage->add_option("--sieve-pmax", cov_opts.sieve_pmax, "AIC range of the sieve")->capture_default_str();
    coverage->add_option("--burn-in", cov_opts.burn_in, "Burn-in of series and sieve")->capture_default_str();
    coverage->add_option("--rho", cov_opts.rho, "AR(1) coefficient")->capture_default_str();
    coverage->add_option("--seed", cov_opts.seed, "Random seed")->capture_default_str();
    add_common(coverage);

    auto* approx = app.add_subcommand("approx-check", "KS distance to the Gaussian-max limit");
    approx->add_option("--scenario", approx_opts.scenario, "model:innovation")->capture_default_str();
    approx->add_option("--rho", approx_opts.rho, "AR(1) coefficient")->capture_default_str();
    approx->add_option("--T", approx_opts.T, "Series length")->capture_default_str();
    approx->add_option("--reps", approx_opts.reps, "Replications")->capture_default_str();
    approx->add_option("--H", approx_opts.H, "Autocovariance lags")->capture_default_str();
    approx->add_option("--oracle-length", approx_opts.oracle_length, "Length of the oracle realization")
        ->capture_default_str();
    approx->add_option("--nmc", approx_opts.n_mc, "Gaussian-max draws")->capture_default_str();
    approx->add_option("--burn-in", approx_opts.burn_in, "Burn-in")->capture_default_str();
    approx->add_option("--seed", approx_opts.seed, "Random seed")->capture_default_str();
    add_common(approx);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (!replay.empty()) {
        if (!app.get_subcommands().empty()) throw DomainError("--replay cannot be combined with a subcommand");
        if (depth > 0) throw DomainError("nested --replay");
        auto rargs = replay_args(replay);
        if (threads) {
            rargs.push_back("--threads");
            rargs.push_back(std::to_string(threads));
        }
        if (!out_dir.empty()) {
            rargs.push_back("--out");
            rargs.push_back(out_dir);
        }
        return dispatch(rargs, out, err, depth + 1);
    }
    if (app.get_subcommands().empty()) {
        out << app.help();
        return kExitUsage;
    }

    RunContext ctx{out, err, sub_out, resolve_threads(sub_threads)};
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    int code = kExitOk;
    if (analyze->parsed()) code = cmd_analyze(analyze_opts, ctx);
    if (test->parsed()) code = cmd_test(test_opts, ctx);
    if (simulate->parsed()) code = cmd_simulate(sim_opts, ctx);
    if (example1->parsed()) code = cmd_example1(ex1_opts, ctx);
    if (coverage->parsed()) code = cmd_coverage(cov_opts, ctx);
    if (approx->parsed()) code = cmd_approx(approx_opts, ctx);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_timing(ctx, started, seconds);
    return code;
}

}  // namespace

std::vector<double> read_series_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open input file " + path);
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(f, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        double v = 0.0;
        if (!parse_number(t, v)) {
            if (!seen_content) {  // header
                seen_content = true;
                continue;
            }
            throw InputError(path + ":" + std::to_string(line_no) + ": '" + t + "' is not a number");
        }
        if (!std::isfinite(v)) {
            throw InputError(path + ":" + std::to_string(line_no) + ": non-finite value");
        }
        seen_content = true;
        values.push_back(v);
    }
    if (values.empty()) throw InputError("input file " + path + " contains no values");
    if (values.size() < 2) throw InputError("input file " + path + " needs at least two values");
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err, 0);
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const DegenerateVarianceError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace secondwild::cli
