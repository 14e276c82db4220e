#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lfract/theorems.hpp"

namespace lfract {

inline constexpr const char* kToolVersion = "lfract 1.0.0";

// One JSON document drives a sweep: parameter grids, function expressions,
// backend selection, tolerances, output locations, and mode flags.
struct RunConfig {
    std::vector<std::string> theorems; // names; empty = all four
    std::vector<double> alpha_grid;
    std::vector<double> s_grid;
    std::vector<double> q_grid;                     // for thm32/thm33
    std::vector<std::pair<double, double>> intervals;
    std::vector<std::string> functions;
    std::string backend_kind = "operational"; // operational | quadrature
    int nodes_per_panel = 512;
    double mesh_grading = 6.0;
    std::string kernel = "right"; // right | left | symmetric
    int series_max_terms = 200000;
    double series_tolerance = 1e-14;
    double tolerance = 1e-9;
    std::uint64_t seed = 42;
    bool inject_violation = false;
    bool symmetrize_kernel = false;
    bool nonneg_waiver = false;
    std::string out_dir = ".";
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Flat result row; the CSV header follows this field order exactly.
struct ReportRow {
    std::string case_id;
    std::string theorem;
    double alpha = 0.0;
    double s = 0.0;
    double q = 0.0;
    double a = 0.0;
    double b = 0.0;
    std::string fn_text;
    std::string backend;
    double lhs = 0.0;
    double mid = 0.0;
    double rhs = 0.0;
    double slack_left = 0.0;
    double slack_right = 0.0;
    double residual = 0.0;
    bool pass = true;
    std::string note;
};

std::vector<TheoremCase> build_cases(const RunConfig& cfg);
ReportRow to_row(const TheoremCase& c, const VerificationResult& r);

// Shortest round-trip decimal text for a double ("nan"/"inf" spelled out).
std::string format_double(double v);
double parse_double(const std::string& text);

void emit_csv(const std::vector<ReportRow>& rows, const std::string& path);
std::vector<ReportRow> read_csv(const std::string& path);

void emit_json_summary(const std::vector<ReportRow>& rows, const SweepSummary& summary,
                       const std::string& config_echo_json, const std::string& path);

// Whitespace-separated (alpha, s, slack) columns, one file per theorem.
void emit_plot_columns(const std::vector<ReportRow>& rows, const std::string& dir);

// Full batch run: returns the process exit code.
//   0 = all cases pass, 2 = violations found, 1 = configuration/runtime error.
int run(const std::string& config_path, const std::string& out_dir_override = "",
        std::ostream* log = nullptr);

} // namespace lfract
