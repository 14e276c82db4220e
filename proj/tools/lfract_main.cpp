#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lfract/errors.hpp"
#include "lfract/report.hpp"
#include "lfract/selftest.hpp"
#include "lfract/special_functions.hpp"
#include "lfract/theorems.hpp"

namespace {

lfract::LfiBackend backend_from_flag(const std::string& kind, const std::string& kernel) {
    if (kind == "op" || kind == "operational") {
        return lfract::LfiBackend::operational();
    }
    if (kind == "quad" || kind == "quadrature") {
        lfract::QuadratureConfig qc;
        qc.kernel_side = kernel == "left"        ? lfract::KernelSide::Left
                         : kernel == "symmetric" ? lfract::KernelSide::Symmetric
                                                 : lfract::KernelSide::Right;
        return lfract::LfiBackend::singular_quadrature(qc);
    }
    throw lfract::ConfigError("backend must be 'op' or 'quad', got '" + kind + "'");
}

int do_verify(const std::string& thm, double alpha, double s, double q, double a, double b,
              const std::string& expr, const std::string& backend, const std::string& kernel,
              double tol, bool waive, bool allow_negative) {
    lfract::TheoremCase c;
    c.theorem = lfract::theorem_from_name(thm);
    c.alpha = alpha;
    c.s = s;
    c.q = q;
    c.a = a;
    c.b = b;
    c.f = lfract::FunctionHandle::from_expression(expr, alpha, s);
    c.backend = backend_from_flag(backend, kernel);
    c.tolerance = tol;
    c.waive_certification = waive;
    c.allow_negative = allow_negative;
    c.id = "cli";
    const lfract::VerificationResult r = lfract::verify(c);

    std::cout << lfract::theorem_name(r.theorem) << "  f=" << expr << "  alpha=" << alpha
              << " s=" << s;
    if (c.theorem == lfract::TheoremId::Thm32 || c.theorem == lfract::TheoremId::Thm33) {
        std::cout << " q=" << q;
    }
    std::cout << "  [" << a << ", " << b << "]  backend=" << c.backend.name() << "\n";
    if (r.rejected) {
        std::cout << "rejected: " << r.note << "\n";
        return 1;
    }
    switch (c.theorem) {
        case lfract::TheoremId::Thm31:
            std::cout << "  midpoint bound : " << lfract::format_double(r.lhs) << "\n"
                      << "  integral mean  : " << lfract::format_double(r.mid) << "\n"
                      << "  endpoint bound : " << lfract::format_double(r.rhs) << "\n"
                      << "  slacks         : " << lfract::format_double(r.slack_left) << " / "
                      << lfract::format_double(r.slack_right) << "\n";
            break;
        case lfract::TheoremId::Lemma31:
            std::cout << "  trapezoid side : " << lfract::format_double(r.lhs) << "\n"
                      << "  kernel side    : " << lfract::format_double(r.rhs) << "\n"
                      << "  residual       : " << lfract::format_double(r.residual) << "\n";
            break;
        default:
            std::cout << "  defect : " << lfract::format_double(r.lhs) << "\n"
                      << "  bound  : " << lfract::format_double(r.rhs) << "\n"
                      << "  slack  : " << lfract::format_double(r.slack_right) << "\n";
            break;
    }
    if (!r.note.empty()) std::cout << "  note: " << r.note << "\n";
    std::cout << (r.pass ? "PASS" : "VIOLATION") << "\n";
    return r.pass ? 0 : 2;
}

int do_certify(int sense, const std::string& expr, double alpha, double s, double a, double b,
               bool allow_negative) {
    const lfract::FunctionHandle f = lfract::FunctionHandle::from_expression(expr, alpha, s);
    lfract::CertOptions opt;
    opt.require_nonnegative = !allow_negative;
    const lfract::Interval dom{a, b};
    const lfract::CertReport rep =
        sense == 1 ? lfract::certify_gks1(f, alpha, s, dom, lfract::CertGrid{}, opt)
                   : lfract::certify_gks2(f, alpha, s, dom, lfract::CertGrid{}, opt);
    std::cout << "sense " << sense << "  f=" << expr << "  alpha=" << alpha << " s=" << s
              << "  on [" << a << ", " << b << "]\n"
              << "  max violation : " << lfract::format_double(rep.max_violation) << "\n"
              << "  evaluations   : " << rep.evaluations << "\n";
    if (rep.max_violation > 0.0) {
        std::cout << "  worst triple  : u=" << lfract::format_double(rep.worst_u)
                  << " v=" << lfract::format_double(rep.worst_v)
                  << " lambda1=" << lfract::format_double(rep.worst_lambda) << "\n";
    }
    if (!rep.note.empty()) std::cout << "  note: " << rep.note << "\n";
    std::cout << (rep.certified ? "CERTIFIED" : "NOT CERTIFIED") << "\n";
    return rep.certified ? 0 : 2;
}

int do_moments(const std::vector<double>& alpha_grid, const std::vector<double>& kappa_grid) {
    const lfract::LfiBackend op = lfract::LfiBackend::operational();
    const lfract::LfiBackend quad = lfract::LfiBackend::singular_quadrature();
    std::cout << "alpha      kappa      moment             abs_moment_op      abs_moment_quad    "
                 "bracket(s=kappa/alpha)\n";
    for (double alpha : alpha_grid) {
        for (double kappa : kappa_grid) {
            const double m = lfract::moment({kappa, alpha});
            const double am_op = lfract::abs_moment(kappa, alpha, op);
            const double am_quad = lfract::abs_moment(kappa, alpha, quad);
            std::cout << lfract::format_double(alpha) << "  " << lfract::format_double(kappa)
                      << "  " << lfract::format_double(m) << "  "
                      << lfract::format_double(am_op) << "  "
                      << lfract::format_double(am_quad);
            const double s = kappa / alpha;
            if (s > 0.0 && s <= 1.0) {
                std::cout << "  " << lfract::format_double(lfract::trapezoid_bracket(alpha, s));
            }
            std::cout << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local fractional calculus engine and inequality verification harness"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "verify one inequality/identity case");
    std::string thm = "31";
    double alpha = 1.0, s = 1.0, q = 2.0, a = 0.0, b = 1.0, tol = 1e-9;
    std::string expr = "x^2";
    std::string backend = "op";
    std::string kernel = "right";
    bool waive = false, allow_negative = false;
    verify->add_option("--thm", thm, "theorem id: 31 | l31 | 32 | 33")->required();
    verify->add_option("--alpha", alpha, "fractal order in (0,1]")->required();
    verify->add_option("--s", s, "convexity order in (0,1]")->required();
    verify->add_option("--q", q, "exponent for thm32 (q>=1) / thm33 (q>1)");
    verify->add_option("--a", a, "interval start")->required();
    verify->add_option("--b", b, "interval end")->required();
    verify->add_option("--f", expr, "function expression")->required();
    verify->add_option("--backend", backend, "op | quad");
    verify->add_option("--kernel", kernel, "quadrature kernel: right | left | symmetric");
    verify->add_option("--tol", tol, "pass tolerance");
    verify->add_flag("--waive-certification", waive, "skip the convexity gate");
    verify->add_flag("--allow-negative", allow_negative, "skip the nonnegativity check");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a config-driven parameter sweep");
    std::string config_path;
    std::string out_dir;
    sweep->add_option("--config", config_path, "JSON config file")->required();
    sweep->add_option("--out", out_dir, "output directory (overrides config)");

    // certify
    auto* certify = app.add_subcommand("certify", "certify generalized s-convexity");
    int sense = 2;
    double ca = 0.0, cb = 1.0;
    std::string cexpr;
    double calpha = 0.5, cs = 0.5;
    bool callow = false;
    certify->add_option("--sense", sense, "1 (first sense) or 2 (second sense)")
        ->check(CLI::IsMember({1, 2}));
    certify->add_option("--f", cexpr, "function expression")->required();
    certify->add_option("--alpha", calpha, "fractal order")->required();
    certify->add_option("--s", cs, "convexity order")->required();
    certify->add_option("--a", ca, "domain start");
    certify->add_option("--b", cb, "domain end");
    certify->add_flag("--allow-negative", callow, "skip the nonnegativity check");

    // moments
    auto* moments = app.add_subcommand("moments", "print moment / kernel-moment tables");
    std::vector<double> alpha_grid{0.3, 0.5, 0.7, 0.9, 1.0};
    std::vector<double> kappa_grid{0.0, 0.25, 0.5, 1.0, 1.5, 2.0};
    moments->add_option("--alpha-grid", alpha_grid, "alpha values");
    moments->add_option("--kappa-grid", kappa_grid, "kappa values");

    // selftest
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(verify)) {
            return do_verify(thm, alpha, s, q, a, b, expr, backend, kernel, tol, waive,
                             allow_negative);
        }
        if (app.got_subcommand(sweep)) {
            return lfract::run(config_path, out_dir, &std::cerr);
        }
        if (app.got_subcommand(certify)) {
            return do_certify(sense, cexpr, calpha, cs, ca, cb, callow);
        }
        if (app.got_subcommand(moments)) {
            return do_moments(alpha_grid, kappa_grid);
        }
        if (app.got_subcommand(selftest)) {
            return lfract::selftest::run_all(std::cout) == 0 ? 0 : 1;
        }
    } catch (const lfract::ParseError& e) {
        std::cerr << "error: " << e.what() << " (expected " << e.expected() << ")\n";
        return 1;
    } catch (const lfract::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
