#include <doctest.h>

#include "rabi/cli/config.hpp"
#include "rabi/cli/parallel.hpp"
#include "rabi/cli/run.hpp"
#include "rabi/cli/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

using namespace rabi::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("rabi_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_metadata(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.front() == '#') continue;
        out += line + "\n";
    }
    return out;
}

int run(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
    std::ostringstream o;
    std::ostringstream e;
    const int code = run_cli(args, o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return code;
}

}  // namespace

TEST_CASE("grid parsing") {
    const auto g = GridSpec::parse("1e-1:1e4:40log");
    CHECK(g.count == 40);
    CHECK(g.log);
    const auto v = g.values();
    CHECK(v.front() == 0.1);
    CHECK(v.back() == 1e4);
    CHECK(v[8] == doctest::Approx(std::pow(10.0, -1.0 + 5.0 * 8.0 / 39.0)));
    CHECK(GridSpec::parse("inf").infinite);
    CHECK(GridSpec::parse("0:1:3").values()[1] == 0.5);
    CHECK(GridSpec::parse("2.5").values() == std::vector<double>{2.5});
    CHECK_THROWS_AS(GridSpec::parse("3:1:4"), UsageError);
    CHECK_NOTHROW(GridSpec::parse("3:1:1"));
    CHECK_THROWS_AS(GridSpec::parse("1:2:0"), UsageError);
    CHECK_THROWS_AS(GridSpec::parse("0:2:3log"), UsageError);
    CHECK_THROWS_AS(GridSpec::parse("1:x:3"), UsageError);
    CHECK_THROWS_AS(GridSpec::parse("1:2"), UsageError);
}

TEST_CASE("parse_config examples") {
    auto c = parse_config({"sweep", "--gf", "1.0", "--ratio", "inf", "--tauq", "1e-1:1e4:40log"});
    CHECK(c.command == Command::Sweep);
    CHECK(c.ratio.infinite);
    CHECK(c.tauq->count == 40);
    CHECK(c.tauq->values().size() == 40);

    c = parse_config({"ed", "--g", "1.0", "--ratio", "1e2:1e5:7log", "--levels", "2"});
    CHECK(c.command == Command::Ed);
    CHECK(c.ratio.values().size() == 7);
    CHECK(c.levels == 2);

    try {
        parse_config({"sweep", "--tauq", "1:10:3log"});
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("--gf") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config({"sweep", "--gf", "abc", "--tauq", "1"}), UsageError);
    CHECK_THROWS_AS(parse_config({"sweep", "--gf", "1", "--tauq", "10:1:3"}), UsageError);
    CHECK_THROWS_AS(parse_config({"nope"}), UsageError);
    CHECK_THROWS_AS(parse_config({}), UsageError);
    CHECK_THROWS_AS(parse_config({"kzm", "--tauq", "1", "--bogus", "1"}), UsageError);
    CHECK_THROWS_AS(parse_config({"ed", "--g", "1", "--ratio", "inf"}), UsageError);
    CHECK_THROWS_AS(parse_config({"kzm", "--help"}), HelpRequested);
}

TEST_CASE("config file with command-line override") {
    TempDir dir;
    const auto cfg = dir.file("run.cfg");
    std::ofstream(cfg) << "# sweep recipe\ncommand = sweep\ngf = 0.9\n\ntauq = 1:10:3log  # grid\nratio = inf\n";
    auto c = parse_config({"--config", cfg});
    CHECK(c.command == Command::Sweep);
    CHECK(c.gf == 0.9);
    c = parse_config({"--config", cfg, "--gf", "0.5"});
    CHECK(c.gf == 0.5);
    c = parse_config({"sweep", "--gf=0.7", "--config=" + cfg});
    CHECK(c.gf == 0.7);

    std::ofstream(cfg) << "command = ed\ng = 1\nratio = 100\nquartic = true\n";
    c = parse_config({"--config", cfg});
    CHECK(c.quartic);

    std::ofstream(cfg) << "command = kzm\ntauq = 10\nwidth = 3\n";
    try {
        parse_config({"--config", cfg});
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("width") != std::string::npos);
    }
    std::ofstream(cfg) << "command = kzm\ntauq\n";
    CHECK_THROWS_AS(parse_config({"--config", cfg}), UsageError);
    CHECK_THROWS_AS(parse_config({"--config", dir.file("missing.cfg")}), UsageError);
}

TEST_CASE("table formatting") {
    ResultTable t({{"a", "omega0"}, {"b", ""}, {"c", ""}});
    t.add_row({0.1, std::int64_t{3}, std::string("x,y")});
    CHECK_THROWS(t.add_row({1.0}));
    CHECK(t.body() == "a,b,c\n0.10000000000000001,3,\"x,y\"\n");
    CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_number(INFINITY) == "inf");
    t.metadata.emplace_back("k", "v");
    CHECK(t.to_csv().rfind("# k: v\n# units: a=omega0 b=1 c=1\n", 0) == 0);
}

TEST_CASE("csv round trip") {
    TempDir dir;
    ResultTable t({{"x", ""}, {"err", ""}});
    t.add_row({1.5, std::string("bad \"value\", really")});
    write_atomic(dir.file("t.csv"), t.to_csv());
    const auto d = read_csv(dir.file("t.csv"));
    REQUIRE(d.rows.size() == 1);
    CHECK(d.rows[0][1] == "bad \"value\", really");
    CHECK(d.column("err") == 1);
    CHECK_THROWS_AS(d.column("nope"), UsageError);
    CHECK_FALSE(fs::exists(dir.file("t.csv.tmp")));
}

TEST_CASE("parallel_for covers every index once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    parallel_for(0, 4, [&](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("quench writes one row, metadata and sibling files") {
    TempDir dir;
    const auto out = dir.file("q.csv");
    REQUIRE(run({"quench", "--gf", "1.0", "--tauq", "1000", "--ratio", "inf", "-o", out, "--sample-stride", "50"}) == 0);
    const auto d = read_csv(out);
    CHECK(d.header == std::vector<std::string>{"tau_q", "E_r", "E_r_raw", "invariant_drift", "underflow_flag",
                                               "uncorrected_baseline", "steps", "error"});
    REQUIRE(d.rows.size() == 1);
    CHECK(std::stod(d.rows[0][1]) == doctest::Approx(0.0265).epsilon(0.01));
    CHECK(std::stod(d.rows[0][3]) < 1e-8);
    const auto text = slurp(out);
    CHECK(text.find("# rabi: ") != std::string::npos);
    CHECK(text.find("# wall_time_s: ") != std::string::npos);
    CHECK(text.find("# config gf: 1") != std::string::npos);
    CHECK(slurp(out + ".meta").find("stochastic = none") != std::string::npos);
    CHECK(read_csv(out + ".traj.csv").rows.size() > 10);
}

TEST_CASE("sweep and fit reproduce the universal exponent") {
    TempDir dir;
    const auto sweep = dir.file("sweep.csv");
    REQUIRE(run({"sweep", "--gf", "1", "--ratio", "inf", "--tauq", "1e2:1e4:9log", "-o", sweep}) == 0);
    std::string out;
    REQUIRE(run({"fit", "--input", sweep, "--window", "1e2:1e4"}, &out) == 0);
    const auto body = strip_metadata(out);
    std::istringstream in(body);
    std::string header;
    std::string row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "x_center,mu,mu_stderr,log_amplitude,x_lo,x_hi,r_squared,n_points");
    const double mu = std::stod(row.substr(row.find(',') + 1));
    CHECK(mu == doctest::Approx(-1.0 / 3.0).epsilon(0.02));
    CHECK(row.substr(row.rfind(',') + 1) == "9");
}

TEST_CASE("determinism and parallel equals serial") {
    TempDir dir;
    const std::vector<std::string> base{"sweep", "--gf", "1", "--ratio", "100", "--tauq", "1e-1:1e3:9log"};
    auto a = base;
    a.insert(a.end(), {"-o", dir.file("a.csv")});
    auto b = base;
    b.insert(b.end(), {"-o", dir.file("b.csv"), "--workers", "3"});
    REQUIRE(run(a) == 0);
    REQUIRE(run(b) == 0);
    CHECK(strip_metadata(slurp(dir.file("a.csv"))) == strip_metadata(slurp(dir.file("b.csv"))));

    const std::vector<std::string> ed{"ed", "--g", "0.5:1.5:3", "--ratio", "1e2:1e3:2log", "--levels", "2"};
    std::string s1;
    std::string s2;
    auto e2 = ed;
    e2.insert(e2.end(), {"--workers", "4"});
    REQUIRE(run(ed, &s1) == 0);
    REQUIRE(run(e2, &s2) == 0);
    CHECK(strip_metadata(s1) == strip_metadata(s2));
    CHECK(std::count(s1.begin(), s1.end(), '\n') > 12);
}

TEST_CASE("kzm table") {
    std::string out;
    REQUIRE(run({"kzm", "--tauq", "1e2:1e5:13log"}, &out) == 0);
    const auto body = strip_metadata(out);
    CHECK(body.rfind("tau_q,g_hat_numeric,g_hat_asymptotic,abs_difference,impulsive_flag,error\n", 0) == 0);
    CHECK(std::count(body.begin(), body.end(), '\n') == 14);
}

TEST_CASE("omega0 rescales outputs only") {
    std::string one;
    std::string two;
    REQUIRE(run({"effective", "--g", "0.6"}, &one) == 0);
    REQUIRE(run({"effective", "--g", "0.6", "--omega0", "2"}, &two) == 0);
    CHECK(strip_metadata(one).find(",0.80000000000000004,") != std::string::npos);
    CHECK(strip_metadata(two).find(",1.6000000000000001,") != std::string::npos);
}

TEST_CASE("exit codes") {
    TempDir dir;
    std::string err;
    CHECK(run({"sweep", "--tauq", "1"}, nullptr, &err) == kExitUsage);
    CHECK(err.find("--gf") != std::string::npos);
    CHECK(run({"kzm", "--tauq", "1", "-o", dir.file("missing/x.csv")}) == kExitUsage);
    CHECK(run({"fit", "--input", dir.file("none.csv")}) == kExitUsage);
    // ED that cannot converge under the cutoff cap: partial failure, error column filled
    std::string out;
    CHECK(run({"ed", "--g", "1", "--ratio", "1e2:1e4:2log", "--max-cutoff", "64", "--tol", "1e-14"}, &out) ==
          kExitNumerical);
    CHECK(out.find("cutoff cap") != std::string::npos);
    CHECK(run({"kzm", "--help"}, &out) == kExitOk);
    CHECK(out.find("--tauq") != std::string::npos);
}

TEST_CASE("binary entry point") {
    const char* bin = std::getenv("RABI_BIN");
    if (!bin) return;
    const std::string b(bin);
    CHECK(WEXITSTATUS(std::system((b + " kzm --tauq 100 > /dev/null").c_str())) == 0);
    CHECK(WEXITSTATUS(std::system((b + " sweep --tauq 1 2> /dev/null").c_str())) == 2);
}
