#include "lfract/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lfract/errors.hpp"

namespace lfract {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename T>
T field_or(const json& j, const char* name, T fallback) {
    if (!j.contains(name)) return fallback;
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + name + "': " + e.what());
    }
}

std::vector<double> grid_field(const json& j, const char* name, bool required) {
    if (!j.contains(name)) {
        if (required) {
            throw ConfigError(std::string("config is missing required field '") + name + "'");
        }
        return {};
    }
    std::vector<double> grid;
    try {
        grid = j.at(name).get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + name + "': " + e.what());
    }
    if (grid.empty()) {
        throw ConfigError(std::string("config field '") + name + "' must be nonempty");
    }
    return grid;
}

} // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    cfg.theorems = field_or<std::vector<std::string>>(j, "theorems",
                                                      {"thm31", "lemma31", "thm32", "thm33"});
    if (cfg.theorems.empty()) {
        throw ConfigError("config field 'theorems' must be nonempty");
    }
    for (const auto& t : cfg.theorems) {
        theorem_from_name(t); // validates
    }
    cfg.alpha_grid = grid_field(j, "alpha_grid", true);
    cfg.s_grid = grid_field(j, "s_grid", true);
    cfg.q_grid = grid_field(j, "q_grid", false);
    if (cfg.q_grid.empty()) cfg.q_grid = {2.0};

    if (!j.contains("functions")) {
        throw ConfigError("config is missing required field 'functions'");
    }
    cfg.functions = field_or<std::vector<std::string>>(j, "functions", {});
    if (cfg.functions.empty()) {
        throw ConfigError("config field 'functions' must be nonempty");
    }

    if (!j.contains("intervals")) {
        cfg.intervals = {{0.0, 1.0}};
    } else {
        try {
            for (const auto& pair : j.at("intervals")) {
                if (!pair.is_array() || pair.size() != 2) {
                    throw ConfigError("config field 'intervals' must hold [a, b] pairs");
                }
                cfg.intervals.emplace_back(pair[0].get<double>(), pair[1].get<double>());
            }
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config field 'intervals': ") + e.what());
        }
        if (cfg.intervals.empty()) {
            throw ConfigError("config field 'intervals' must be nonempty");
        }
    }

    if (j.contains("backend")) {
        const json& b = j.at("backend");
        if (!b.is_object()) {
            throw ConfigError("config field 'backend' must be an object");
        }
        cfg.backend_kind = field_or<std::string>(b, "kind", "operational");
        cfg.nodes_per_panel = field_or<int>(b, "nodes_per_panel", cfg.nodes_per_panel);
        cfg.mesh_grading = field_or<double>(b, "mesh_grading", cfg.mesh_grading);
        cfg.kernel = field_or<std::string>(b, "kernel", cfg.kernel);
        cfg.series_max_terms = field_or<int>(b, "series_max_terms", cfg.series_max_terms);
        cfg.series_tolerance = field_or<double>(b, "series_tolerance", cfg.series_tolerance);
    }
    cfg.tolerance = field_or<double>(j, "tolerance", cfg.tolerance);
    if (!(cfg.tolerance > 0.0)) {
        throw ConfigError("config field 'tolerance' must be positive");
    }
    cfg.seed = field_or<std::uint64_t>(j, "seed", cfg.seed);
    if (j.contains("modes")) {
        const json& m = j.at("modes");
        cfg.inject_violation = field_or<bool>(m, "inject_violation", false);
        cfg.symmetrize_kernel = field_or<bool>(m, "symmetrize_kernel", false);
        cfg.nonneg_waiver = field_or<bool>(m, "nonneg_waiver", false);
    }
    cfg.out_dir = field_or<std::string>(j, "out_dir", cfg.out_dir);

    for (double a : cfg.alpha_grid) {
        if (!(a > 0.0) || a > 1.0) {
            throw ConfigError("config field 'alpha_grid' values must lie in (0, 1]");
        }
    }
    for (double s : cfg.s_grid) {
        if (!(s > 0.0) || s > 1.0) {
            throw ConfigError("config field 's_grid' values must lie in (0, 1]");
        }
    }
    for (double q : cfg.q_grid) {
        if (!(q >= 1.0)) {
            throw ConfigError("config field 'q_grid' values must be >= 1");
        }
    }
    for (auto [a, b] : cfg.intervals) {
        if (!(a >= 0.0) || !(b > a)) {
            throw ConfigError("config field 'intervals' entries must satisfy 0 <= a < b");
        }
    }
    if (cfg.backend_kind != "operational" && cfg.backend_kind != "quadrature") {
        throw ConfigError("config field 'backend.kind' must be operational or quadrature");
    }
    if (cfg.kernel != "right" && cfg.kernel != "left" && cfg.kernel != "symmetric") {
        throw ConfigError("config field 'backend.kernel' must be right, left, or symmetric");
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::vector<TheoremCase> build_cases(const RunConfig& cfg) {
    LfiBackend backend = LfiBackend::operational();
    if (cfg.backend_kind == "quadrature") {
        QuadratureConfig qc;
        qc.nodes_per_panel = cfg.nodes_per_panel;
        qc.mesh_grading = cfg.mesh_grading;
        qc.kernel_side = cfg.symmetrize_kernel ? KernelSide::Symmetric
                         : cfg.kernel == "left" ? KernelSide::Left
                         : cfg.kernel == "symmetric" ? KernelSide::Symmetric
                                                     : KernelSide::Right;
        backend = LfiBackend::singular_quadrature(qc);
    } else {
        SeriesConfig sc;
        sc.max_terms = cfg.series_max_terms;
        sc.tolerance = cfg.series_tolerance;
        backend = LfiBackend::operational(sc);
    }

    std::vector<TheoremCase> cases;
    long counter = 0;
    for (const auto& tname : cfg.theorems) {
        const TheoremId id = theorem_from_name(tname);
        const bool uses_q = id == TheoremId::Thm32 || id == TheoremId::Thm33;
        const std::vector<double> qs = uses_q ? cfg.q_grid : std::vector<double>{kNaN};
        for (const auto& fn : cfg.functions) {
            for (auto [a, b] : cfg.intervals) {
                for (double alpha : cfg.alpha_grid) {
                    for (double s : cfg.s_grid) {
                        for (double q : qs) {
                            TheoremCase c;
                            c.theorem = id;
                            c.alpha = alpha;
                            c.s = s;
                            c.q = uses_q ? q : 1.0;
                            c.a = a;
                            c.b = b;
                            c.f = FunctionHandle::from_expression(fn, alpha, s);
                            c.backend = backend;
                            c.tolerance = cfg.tolerance;
                            c.inject_violation = cfg.inject_violation;
                            c.allow_negative = cfg.nonneg_waiver;
                            c.cert_grid.seed = cfg.seed;
                            char idbuf[32];
                            std::snprintf(idbuf, sizeof(idbuf), "c%05ld-%s", ++counter,
                                          tname.c_str());
                            c.id = idbuf;
                            cases.push_back(std::move(c));
                        }
                    }
                }
            }
        }
    }
    return cases;
}

ReportRow to_row(const TheoremCase& c, const VerificationResult& r) {
    ReportRow row;
    row.case_id = r.case_id;
    row.theorem = theorem_name(r.theorem);
    row.alpha = c.alpha;
    row.s = c.s;
    const bool uses_q = c.theorem == TheoremId::Thm32 || c.theorem == TheoremId::Thm33;
    row.q = uses_q ? c.q : kNaN;
    row.a = c.a;
    row.b = c.b;
    row.fn_text = c.f.text();
    row.backend = c.backend.name();
    row.lhs = r.lhs;
    row.mid = r.mid;
    row.rhs = r.rhs;
    row.slack_left = r.slack_left;
    row.slack_right = r.slack_right;
    row.residual = r.residual;
    row.pass = r.pass;
    row.note = r.note;
    return row;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    if (text == "nan" || text.empty()) return kNaN;
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{}) {
        throw ConfigError("not a number: '" + text + "'");
    }
    return v;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

constexpr const char* kCsvHeader =
    "case_id,theorem,alpha,s,q,a,b,fn_text,backend,lhs,mid,rhs,slack_left,slack_right,"
    "residual,pass,note";

double plot_slack(const ReportRow& row) {
    if (row.theorem == "thm31") return std::min(row.slack_left, row.slack_right);
    if (row.theorem == "lemma31") return -row.residual;
    return row.slack_right;
}

void require_writable(const std::ofstream& out, const std::string& path) {
    if (!out) {
        throw ConfigError("cannot write output file: " + path);
    }
}

} // namespace

void emit_csv(const std::vector<ReportRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require_writable(out, path);
    out << kCsvHeader << "\n";
    for (const auto& r : rows) {
        out << csv_escape(r.case_id) << ',' << r.theorem << ',' << format_double(r.alpha)
            << ',' << format_double(r.s) << ',' << format_double(r.q) << ','
            << format_double(r.a) << ',' << format_double(r.b) << ','
            << csv_escape(r.fn_text) << ',' << r.backend << ',' << format_double(r.lhs) << ','
            << format_double(r.mid) << ',' << format_double(r.rhs) << ','
            << format_double(r.slack_left) << ',' << format_double(r.slack_right) << ','
            << format_double(r.residual) << ',' << (r.pass ? "true" : "false") << ','
            << csv_escape(r.note) << "\n";
    }
}

std::vector<ReportRow> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open CSV: " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ConfigError("CSV header mismatch in " + path);
    }
    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = csv_split(line);
        if (f.size() != 17) {
            throw ConfigError("CSV row with " + std::to_string(f.size()) + " fields");
        }
        ReportRow r;
        r.case_id = f[0];
        r.theorem = f[1];
        r.alpha = parse_double(f[2]);
        r.s = parse_double(f[3]);
        r.q = parse_double(f[4]);
        r.a = parse_double(f[5]);
        r.b = parse_double(f[6]);
        r.fn_text = f[7];
        r.backend = f[8];
        r.lhs = parse_double(f[9]);
        r.mid = parse_double(f[10]);
        r.rhs = parse_double(f[11]);
        r.slack_left = parse_double(f[12]);
        r.slack_right = parse_double(f[13]);
        r.residual = parse_double(f[14]);
        r.pass = f[15] == "true";
        r.note = f[16];
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit_json_summary(const std::vector<ReportRow>& rows, const SweepSummary& summary,
                       const std::string& config_echo_json, const std::string& path) {
    json doc;
    doc["tool"] = kToolVersion;
    if (!config_echo_json.empty()) {
        doc["config"] = json::parse(config_echo_json);
    }
    doc["cases"] = summary.cases;
    doc["violations"] = summary.violations;
    doc["rejected"] = summary.rejected;
    doc["errors"] = summary.errors;
    json per = json::object();
    for (TheoremId id :
         {TheoremId::Thm31, TheoremId::Lemma31, TheoremId::Thm32, TheoremId::Thm33}) {
        const auto& p = summary.of(id);
        if (p.cases == 0) continue;
        json entry;
        entry["cases"] = p.cases;
        entry["violations"] = p.violations;
        if (std::isfinite(p.min_slack)) {
            entry["min_slack"] = p.min_slack;
            entry["worst_case_id"] = p.worst_case_id;
        }
        per[theorem_name(id)] = entry;
    }
    doc["per_theorem"] = per;
    doc["rows"] = rows.size();

    std::ofstream out(path, std::ios::binary);
    require_writable(out, path);
    out << doc.dump(2) << "\n";
}

void emit_plot_columns(const std::vector<ReportRow>& rows, const std::string& dir) {
    for (TheoremId id :
         {TheoremId::Thm31, TheoremId::Lemma31, TheoremId::Thm32, TheoremId::Thm33}) {
        const std::string name = theorem_name(id);
        std::vector<const ReportRow*> selected;
        for (const auto& r : rows) {
            if (r.theorem == name && r.note.rfind("rejected", 0) != 0 &&
                r.note.rfind("error", 0) != 0) {
                selected.push_back(&r);
            }
        }
        if (selected.empty()) continue;
        const std::string path = dir + "/plot_" + name + ".dat";
        std::ofstream out(path, std::ios::binary);
        require_writable(out, path);
        out << "# alpha s slack\n";
        for (const ReportRow* r : selected) {
            out << format_double(r->alpha) << ' ' << format_double(r->s) << ' '
                << format_double(plot_slack(*r)) << "\n";
        }
    }
}

int run(const std::string& config_path, const std::string& out_dir_override,
        std::ostream* log) {
    std::ostream& err = log ? *log : std::cerr;
    try {
        std::ifstream in(config_path);
        if (!in) {
            throw ConfigError("cannot open config file: " + config_path);
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        RunConfig cfg = parse_run_config(text);
        if (!out_dir_override.empty()) {
            cfg.out_dir = out_dir_override;
        }
        std::filesystem::create_directories(cfg.out_dir);

        const std::vector<TheoremCase> cases = build_cases(cfg);
        SweepSummary summary;
        const std::vector<VerificationResult> results = sweep(cases, &summary);

        std::vector<ReportRow> rows;
        rows.reserve(results.size());
        for (std::size_t i = 0; i < results.size(); ++i) {
            rows.push_back(to_row(cases[i], results[i]));
        }
        emit_csv(rows, cfg.out_dir + "/report.csv");
        const std::string echo = nlohmann::json::parse(text).dump();
        emit_json_summary(rows, summary, echo, cfg.out_dir + "/summary.json");
        emit_plot_columns(rows, cfg.out_dir);

        if (log) {
            *log << "cases=" << summary.cases << " violations=" << summary.violations
                 << " rejected=" << summary.rejected << " errors=" << summary.errors << "\n";
        }
        return summary.violations > 0 ? 2 : 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace lfract
