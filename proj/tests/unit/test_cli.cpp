#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using secondwild::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("secondwild_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    [[nodiscard]] const fs::path& path() const { return path_; }
    [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const {
        std::ofstream f(path_ / name, std::ios::binary);
        f << content;
        return file(name);
    }

    std::string write_series(const std::string& name, const std::vector<double>& x,
                             const std::string& header = "") const {
        std::ostringstream s;
        s.precision(17);
        if (!header.empty()) s << header << "\n";
        for (double v : x) s << v << "\n";
        return write(name, s.str());
    }

private:
    fs::path path_;
};

}  // namespace

TEST_CASE("exit codes") {
    TempDir dir;
    const auto good = dir.write_series("x.txt", oracle::ar1_series(300, 0.5, 1));

    CHECK(cli({"--version"}).code == 0);
    CHECK(cli({"analyze", "--help"}).code == 0);
    CHECK(cli({}).code == 2);
    CHECK(cli({"analyze"}).code == 2);
    CHECK(cli({"analyze", good, "--method", "block"}).code == 2);

    const auto empty = dir.write("empty.txt", "# nothing\n\n");
    auto r = cli({"analyze", empty});
    CHECK(r.code == 2);
    CHECK(r.err.find("contains no values") != std::string::npos);

    r = cli({"analyze", good, "--d", "4", "--p", "5", "--B", "100"});
    CHECK(r.code == 2);
    CHECK(r.err.find("AR order p = 5 exceeds max lag d = 4") != std::string::npos);

    r = cli({"coverage", "--scenario", "ar3:product", "--reps", "100", "--T", "100"});
    CHECK(r.code == 2);
    CHECK(r.err.find("ar1:independent") != std::string::npos);
    CHECK(r.err.find("nlar2:nonstationary") != std::string::npos);

    CHECK(cli({"analyze", dir.file("missing.txt")}).code == 2);

    const auto zeros = dir.write_series("zeros.txt", std::vector<double>(100, 0.0));
    r = cli({"analyze", zeros, "--B", "100"});
    CHECK(r.code == 3);
    CHECK(r.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("input files") {
    TempDir dir;
    const auto bad = dir.write("bad.txt", "x\n1.0\n2.0\n# comment\nabc\n3.0\n");
    auto r = cli({"analyze", bad});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.txt:5:") != std::string::npos);

    const auto x = oracle::ar1_series(200, 0.4, 2);
    const auto with_header = dir.write_series("h.txt", x, "value");
    const auto plain = dir.write_series("p.txt", x);
    CHECK(secondwild::cli::read_series_file(with_header) == secondwild::cli::read_series_file(plain));
    CHECK(secondwild::cli::read_series_file(plain).size() == 200);
    const auto survives = dir.write("s.txt", "  1.5 \r\n\n+2\n-3e-1\n");
    CHECK(secondwild::cli::read_series_file(survives) == std::vector<double>{1.5, 2.0, -0.3});
    CHECK_THROWS_AS((void)secondwild::cli::read_series_file(dir.write("one.txt", "1\n")),
                    secondwild::cli::InputError);
    CHECK_THROWS_AS((void)secondwild::cli::read_series_file(dir.write("nan.txt", "1\nnan\n")),
                    secondwild::cli::InputError);
}

TEST_CASE("analyze output does not depend on the thread count") {
    TempDir dir;
    const auto input = dir.write_series("x.txt", oracle::ar1_series(400, 0.6, 3));
    const std::string o1 = dir.file("t1"), o3 = dir.file("t3");
    const std::vector<std::string> base{"analyze", input, "--B", "300", "--seed", "9", "--p-auto"};
    auto a1 = base, a3 = base;
    a1.insert(a1.end(), {"--threads", "1", "--out", o1});
    a3.insert(a3.end(), {"--threads", "3", "--out", o3});
    const auto r1 = cli(a1);
    const auto r3 = cli(a3);
    REQUIRE(r1.code == 0);
    REQUIRE(r3.code == 0);
    CHECK(r1.out == r3.out);
    for (const char* name : {"report.json", "bands.csv", "manifest.json"}) {
        CAPTURE(name);
        CHECK(slurp(fs::path(o1) / name) == slurp(fs::path(o3) / name));
    }
    const auto bands = slurp(fs::path(o1) / "bands.csv");
    CHECK(bands.rfind("# manifest {", 0) == 0);
    CHECK(bands.find("family,lag,estimate,lower,upper\n") != std::string::npos);

    const auto timing = nlohmann::json::parse(slurp(fs::path(o3) / "timing.json"));
    CHECK(timing["threads"] == 3);
    CHECK(timing["elapsed_seconds"].get<double>() >= 0.0);

    const auto manifest = nlohmann::json::parse(slurp(fs::path(o1) / "manifest.json"));
    CHECK(manifest["subcommand"] == "analyze");
    CHECK(manifest["seed"] == 9);
    CHECK(manifest["resolved"]["T"] == 400);
    CHECK(manifest["resolved"]["p"].get<int>() >= 1);
    const auto report = nlohmann::json::parse(slurp(fs::path(o1) / "report.json"));
    CHECK(report["manifest"] == manifest);

    SUBCASE("replay reproduces the outputs") {
        const std::string o2 = dir.file("replayed");
        const auto rr = cli({"--replay", (fs::path(o1) / "manifest.json").string(), "--out", o2});
        REQUIRE(rr.code == 0);
        for (const char* name : {"report.json", "bands.csv", "manifest.json"}) {
            CAPTURE(name);
            CHECK(slurp(fs::path(o1) / name) == slurp(fs::path(o2) / name));
        }
        const std::string o4 = dir.file("replayed_json");
        CHECK(cli({"--replay", (fs::path(o1) / "report.json").string(), "--out", o4}).code == 0);
        CHECK(slurp(fs::path(o1) / "bands.csv") == slurp(fs::path(o4) / "bands.csv"));
        CHECK(cli({"--replay", input}).code == 2);
    }

    SUBCASE("sieve method") {
        const std::string os = dir.file("sieve");
        const auto rs = cli({"analyze", input, "--B", "200", "--method", "sieve", "--out", os});
        REQUIRE(rs.code == 0);
        const auto m = nlohmann::json::parse(slurp(fs::path(os) / "manifest.json"));
        CHECK(m["resolved"].contains("sieve_order"));
        CHECK(nlohmann::json::parse(slurp(fs::path(os) / "report.json"))["report"]["method"] == "sieve");
    }
}

TEST_CASE("test subcommand") {
    TempDir dir;
    const auto input = dir.write_series("x.txt", oracle::ar1_series(500, 0.5, 4));
    const std::string oa = dir.file("a");
    auto r = cli({"analyze", input, "--B", "300", "--p", "2", "--out", oa});
    REQUIRE(r.code == 0);
    const auto report = nlohmann::json::parse(slurp(fs::path(oa) / "report.json"))["report"];
    std::vector<double> sigma, rho, a;
    for (const auto& b : report["bands"]["autocovariance"]) sigma.push_back(b["estimate"].get<double>());
    for (const auto& b : report["bands"]["autocorrelation"]) rho.push_back(b["estimate"].get<double>());
    for (const auto& b : report["bands"]["ar_coefficients"]) a.push_back(b["estimate"].get<double>());
    REQUIRE(sigma.size() == 4);
    REQUIRE(a.size() == 2);

    auto hyp = [&](const nlohmann::json& j) { return dir.write("h" + std::to_string(j.dump().size()) + ".json", j.dump()); };
    auto decisions = [&](const std::string& out) {
        return nlohmann::json::parse(slurp(fs::path(out) / "decisions.json"))["decisions"]["tests"];
    };

    const std::string eq = dir.file("eq");
    r = cli({"test", input, "--B", "300", "--p", "2", "--out", eq, "--hypothesis",
             hyp({{"sigma", sigma}, {"rho", rho}, {"a", a}})});
    REQUIRE(r.code == 0);
    auto t = decisions(eq);
    for (const char* fam : {"autocovariance", "autocorrelation", "ar_coefficients"}) {
        CAPTURE(fam);
        CHECK(t[fam]["reject"] == false);
        CHECK(t[fam]["statistic"].get<double>() == 0.0);
    }
    CHECK(r.out.find("accept") != std::string::npos);

    auto far = rho;
    far[0] += 1e6;
    const std::string rej = dir.file("rej");
    r = cli({"test", input, "--B", "300", "--p", "2", "--out", rej, "--hypothesis", hyp({{"rho", far}})});
    REQUIRE(r.code == 0);
    t = decisions(rej);
    CHECK(t["autocorrelation"]["reject"] == true);
    CHECK(t["autocovariance"].is_null());
    CHECK(slurp(fs::path(rej) / "decisions.csv").find("autocorrelation,") != std::string::npos);

    r = cli({"test", input, "--B", "300", "--hypothesis", hyp({{"rho", {0.1, 0.2}}})});
    CHECK(r.code == 2);

    const std::string nz = dir.file("nz");
    r = cli({"test", input, "--B", "300", "--null-zero", "--out", nz});
    REQUIRE(r.code == 0);
    t = decisions(nz);
    CHECK(t["autocorrelation"]["reject"] == true);  // rho = 0.5
    CHECK(t["autocovariance"].is_null());        // lag 0 is in H

    CHECK(cli({"test", input, "--B", "300"}).code == 2);
    CHECK(cli({"test", input, "--B", "300", "--null-zero", "--hypothesis", hyp({{"rho", rho}})}).code == 2);
}

TEST_CASE("simulate") {
    const std::vector<std::string> args{"simulate", "--model", "ar2", "--innovation", "product", "--T", "50",
                                        "--seed", "3"};
    const auto a = cli(args);
    const auto b = cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    std::istringstream lines(a.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line.rfind("# manifest ", 0) == 0);
    std::getline(lines, line);
    CHECK(line == "x");
    int n = 0;
    while (std::getline(lines, line)) ++n;
    CHECK(n == 50);

    auto other = args;
    other.back() = "4";
    CHECK(cli(other).out != a.out);

    TempDir dir;
    auto to_dir = args;
    to_dir.insert(to_dir.end(), {"--out", dir.file("sim")});
    REQUIRE(cli(to_dir).code == 0);
    const auto series = dir.file("sim") + "/series.csv";
    CHECK(slurp(series) == a.out);
    // the simulated file is valid analyze input
    CHECK(secondwild::cli::read_series_file(series).size() == 50);
    CHECK(cli({"simulate", "--model", "ar7"}).code == 2);
}

TEST_CASE("study subcommands at small sizes") {
    TempDir dir;
    SUBCASE("example1") {
        const auto r = cli({"example1", "--n", "1000", "--reps", "100", "--out", dir.file("e")});
        REQUIRE(r.code == 0);
        CHECK(r.out == slurp(dir.file("e") + "/example1.csv"));
        const auto j = nlohmann::json::parse(slurp(dir.file("e") + "/example1.json"));
        CHECK(j["example1"]["rows"].size() == 3);
    }
    SUBCASE("coverage") {
        const std::vector<std::string> args{"coverage", "--scenario", "ar1:independent", "--method", "wild",
                                            "--T", "200", "--reps", "100", "--seed", "2"};
        auto a = args, b = args;
        a.insert(a.end(), {"--threads", "1"});
        b.insert(b.end(), {"--threads", "2"});
        const auto r1 = cli(a);
        const auto r2 = cli(b);
        REQUIRE(r1.code == 0);
        CHECK(r1.out == r2.out);
        CHECK(r1.out.find("\"mode\":\"warp-speed\"") != std::string::npos);
        int rows = 0;
        std::istringstream lines(r1.out);
        for (std::string line; std::getline(lines, line);) rows += line.rfind("ar1,", 0) == 0;
        CHECK(rows == 3);
    }
    SUBCASE("approx-check") {
        const auto r = cli({"approx-check", "--T", "200", "--reps", "1000", "--oracle-length", "20000", "--nmc",
                            "2000", "--out", dir.file("k")});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(slurp(dir.file("k") + "/approx.json"));
        CHECK(j["approx_check"]["ks_distance"].get<double>() > 0.0);
        CHECK(cli({"approx-check", "--reps", "10"}).code == 2);
    }
}
