#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lfract/convexity.hpp"
#include "lfract/local_fractional.hpp"

namespace lfract {

// The four verified statements:
//   Thm31   : midpoint bound <= normalized integral mean <= endpoint bound
//             for generalized s-convex f (an inequality chain);
//   Lemma31 : trapezoid-defect identity against the split-kernel integral
//             of the order-alpha derivative (an equality, residual checked);
//   Thm32   : trapezoid-defect upper bound for q >= 1;
//   Thm33   : trapezoid-defect upper bound for q > 1, dual-exponent form.
enum class TheoremId { Thm31, Lemma31, Thm32, Thm33 };

std::string theorem_name(TheoremId id);
TheoremId theorem_from_name(const std::string& name);

struct TheoremCase {
    TheoremId theorem = TheoremId::Thm31;
    double alpha = 1.0;
    double s = 1.0;
    double q = 1.0; // used by Thm32 (q >= 1) and Thm33 (q > 1)
    double a = 0.0;
    double b = 1.0;
    FunctionHandle f;
    LfiBackend backend = LfiBackend::operational();
    double tolerance = 1e-9;
    bool waive_certification = false;
    bool allow_negative = false;   // disable the nonnegativity precheck
    bool inject_violation = false; // self-test: shrink the bound by 10%
    // Gate grid: lighter than the standalone certifier default, since every
    // swept case pays for it.
    CertGrid cert_grid{32, 17, 128, 0x2545F4914F6CDD1DULL};
    std::string id;
};

struct VerificationResult {
    std::string case_id;
    TheoremId theorem = TheoremId::Thm31;
    double lhs = std::numeric_limits<double>::quiet_NaN();
    double mid = std::numeric_limits<double>::quiet_NaN();
    double rhs = std::numeric_limits<double>::quiet_NaN();
    double slack_left = std::numeric_limits<double>::quiet_NaN();
    double slack_right = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    bool pass = true;
    bool rejected = false; // hypothesis failed (certification), not a violation
    bool errored = false;  // evaluation failed; see note
    std::string note;
};

VerificationResult verify_thm31(const TheoremCase& c);
VerificationResult verify_lemma31(const TheoremCase& c);
VerificationResult verify_thm32(const TheoremCase& c);
VerificationResult verify_thm33(const TheoremCase& c);
VerificationResult verify(const TheoremCase& c); // dispatch on c.theorem

// Endpoint constant of the chain: Gamma(1+s*alpha)/Gamma(1+(s+1)*alpha).
double endpoint_constant(double alpha, double s);

// Bracket constant of the q >= 1 bound, as printed in the statement:
//   K(alpha, s) = endpoint_constant
//               + Gamma(1+alpha)Gamma(1+s*alpha)/Gamma(1+(s+2)alpha)
//                 * (2^(-alpha*s) - 2^alpha).
double trapezoid_bracket(double alpha, double s);

struct SweepSummary {
    long cases = 0;
    long violations = 0;
    long rejected = 0;
    long errors = 0;
    struct PerTheorem {
        long cases = 0;
        long violations = 0;
        double min_slack = std::numeric_limits<double>::infinity();
        std::string worst_case_id;
    };
    PerTheorem per[4];
    PerTheorem& of(TheoremId id) { return per[static_cast<int>(id)]; }
    const PerTheorem& of(TheoremId id) const { return per[static_cast<int>(id)]; }
};

// Evaluate all cases in order; per-case failures become rows, never aborts.
std::vector<VerificationResult> sweep(const std::vector<TheoremCase>& cases,
                                      SweepSummary* summary = nullptr);

struct SharpnessReport {
    double min_slack = std::numeric_limits<double>::infinity();
    std::string case_id;
    VerificationResult result;
};

// Minimum-slack case over a grid, per theorem; probes empirical tightness.
SharpnessReport sharpness_probe(TheoremId id, const std::vector<TheoremCase>& cases);

// Built-in certifiable families used by sweeps and self tests.
std::vector<std::string> default_family(TheoremId id);

} // namespace lfract
