#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lfract/errors.hpp"
#include "lfract/report.hpp"

using namespace lfract;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("lfract-test-" + std::to_string(reinterpret_cast<uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

constexpr const char* kMinimalConfig = R"({
  "alpha_grid": [1.0],
  "s_grid": [1.0],
  "functions": ["x^2"],
  "theorems": ["thm31"],
  "intervals": [[0, 1]]
})";

} // namespace

TEST_CASE("format_double round-trips and spells out specials") {
    CHECK(parse_double(format_double(0.1)) == 0.1);
    CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(std::isnan(parse_double("nan")));
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("config parsing: defaults, validation, diagnostics") {
    const RunConfig cfg = parse_run_config(kMinimalConfig);
    CHECK(cfg.theorems.size() == 1);
    CHECK(cfg.backend_kind == "operational");
    CHECK(cfg.tolerance == 1e-9);

    CHECK_THROWS_AS(parse_run_config("{nope"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"alpha_grid": [1], "s_grid": [1]})"), ConfigError);
    CHECK_THROWS_AS(
        parse_run_config(R"({"alpha_grid": [], "s_grid": [1], "functions": ["x"]})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_run_config(R"({"alpha_grid": [2], "s_grid": [1], "functions": ["x"]})"),
        ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"alpha_grid": [1], "s_grid": [1],
        "functions": ["x"], "intervals": [[1, 0.5]]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"alpha_grid": [1], "s_grid": [1],
        "functions": ["x"], "theorems": ["thm99"]})"),
                    ConfigError);
    // field name appears in the diagnostic
    try {
        parse_run_config(R"({"alpha_grid": [1], "s_grid": [1]})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("functions") != std::string::npos);
    }
}

TEST_CASE("case construction is deterministic and ordered") {
    RunConfig cfg = parse_run_config(kMinimalConfig);
    cfg.alpha_grid = {0.5, 1.0};
    cfg.s_grid = {0.5};
    const auto cases = build_cases(cfg);
    REQUIRE(cases.size() == 2);
    CHECK(cases[0].id < cases[1].id);
    CHECK(cases[0].alpha == 0.5);
    CHECK(cases[1].alpha == 1.0);
}

TEST_CASE("csv: header-only for zero rows, escaping, round trip") {
    TempDir dir;
    const std::string path = dir.file("empty.csv");
    emit_csv({}, path);
    const std::string text = slurp(path);
    CHECK(text ==
          "case_id,theorem,alpha,s,q,a,b,fn_text,backend,lhs,mid,rhs,slack_left,slack_right,"
          "residual,pass,note\n");

    ReportRow row;
    row.case_id = "c1";
    row.theorem = "thm31";
    row.alpha = 0.5;
    row.s = 0.25;
    row.q = std::nan("");
    row.a = 0;
    row.b = 1;
    row.fn_text = "x^(a*s)";
    row.backend = "operational";
    row.lhs = 1.0 / 3.0;
    row.mid = 0.5;
    row.rhs = 0.75;
    row.slack_left = row.mid - row.lhs;
    row.slack_right = row.rhs - row.mid;
    row.residual = std::nan("");
    row.pass = true;
    row.note = "quoted, with comma and \"marks\"";
    const std::string path2 = dir.file("rows.csv");
    emit_csv({row}, path2);
    const auto back = read_csv(path2);
    REQUIRE(back.size() == 1);
    CHECK(back[0].case_id == row.case_id);
    CHECK(back[0].lhs == row.lhs);
    CHECK(back[0].slack_left == row.slack_left);
    CHECK(std::isnan(back[0].q));
    CHECK(back[0].pass == row.pass);
    CHECK(back[0].note == row.note);
}

TEST_CASE("run: minimal config exits 0 and writes one row") {
    TempDir dir;
    {
        std::ofstream cfg(dir.file("run.json"));
        cfg << kMinimalConfig;
    }
    std::ostringstream log;
    const int code = run(dir.file("run.json"), dir.file("out"), &log);
    CHECK(code == 0);
    const auto rows = read_csv((fs::path(dir.file("out")) / "report.csv").string());
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].theorem == "thm31");
    CHECK(rows[0].pass);
    CHECK(fs::exists(fs::path(dir.file("out")) / "summary.json"));
    CHECK(fs::exists(fs::path(dir.file("out")) / "plot_thm31.dat"));
}

TEST_CASE("run: injected violation exits 2; bad config exits 1") {
    TempDir dir;
    {
        std::ofstream cfg(dir.file("inject.json"));
        cfg << R"({
  "alpha_grid": [1.0],
  "s_grid": [0.5],
  "functions": ["x^s"],
  "theorems": ["thm31"],
  "intervals": [[0, 1]],
  "modes": {"inject_violation": true}
})";
    }
    std::ostringstream log;
    CHECK(run(dir.file("inject.json"), dir.file("out2"), &log) == 2);

    {
        std::ofstream cfg(dir.file("bad.json"));
        cfg << R"({"alpha_grid": [1.0], "s_grid": [1.0]})";
    }
    CHECK(run(dir.file("bad.json"), dir.file("out3"), &log) == 1);
    CHECK(run(dir.file("missing.json"), dir.file("out4"), &log) == 1);
}

TEST_CASE("run: identical config and seed give byte-identical outputs") {
    TempDir dir;
    {
        std::ofstream cfg(dir.file("det.json"));
        cfg << R"json({
  "alpha_grid": [0.5, 0.9],
  "s_grid": [0.5],
  "q_grid": [2],
  "functions": ["x^(2*a)"],
  "theorems": ["thm31", "thm32"],
  "intervals": [[0, 1]],
  "seed": 7
})json";
    }
    std::ostringstream log;
    CHECK(run(dir.file("det.json"), dir.file("a"), &log) == 0);
    CHECK(run(dir.file("det.json"), dir.file("b"), &log) == 0);
    CHECK(slurp(dir.file("a") + "/report.csv") == slurp(dir.file("b") + "/report.csv"));
    CHECK(slurp(dir.file("a") + "/summary.json") == slurp(dir.file("b") + "/summary.json"));
}

TEST_CASE("plot columns carry alpha, s, slack per theorem") {
    TempDir dir;
    ReportRow row;
    row.case_id = "c1";
    row.theorem = "thm32";
    row.alpha = 0.5;
    row.s = 0.25;
    row.slack_right = 0.125;
    emit_plot_columns({row}, dir.path.string());
    const std::string text = slurp(dir.file("plot_thm32.dat"));
    CHECK(text == "# alpha s slack\n0.5 0.25 0.125\n");
}
