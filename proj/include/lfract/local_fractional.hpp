#pragma once

#include <optional>
#include <string>

#include "lfract/function_handle.hpp"

namespace lfract {

// Normalized moment of t^kappa over [0, 1]:
//   Gamma(1 + kappa) / Gamma(1 + kappa + alpha).
struct MomentKey {
    double kappa;
    double alpha;
};
double moment(MomentKey key);

enum class KernelSide { Right, Left, Symmetric };

struct QuadratureConfig {
    int nodes_per_panel = 512;     // >= 8
    double mesh_grading = 6.0;     // cell clustering exponent at panel ends
    KernelSide kernel_side = KernelSide::Right;
};

struct SeriesConfig {
    int max_terms = 2000000; // >= 16
    double tolerance = 1e-14;
};

// Realization of the weighted integral operator.
//   Operational: translation/reflection covariant closed-form calculus on
//     shifted power terms (the calculus the inequality proofs run on).
//   SingularQuadrature: (1/Gamma(alpha)) * integral of (b-t)^(alpha-1) f(t),
//     endpoint-singularity-aware composite rule.
// Both reduce to the ordinary integral at alpha = 1 and agree exactly on
// [0,1]-anchored power terms.
class LfiBackend {
public:
    enum class Kind { Operational, SingularQuadrature };

    static LfiBackend operational(SeriesConfig series = {});
    static LfiBackend singular_quadrature(QuadratureConfig quad = {});

    Kind kind() const { return kind_; }
    const QuadratureConfig& quadrature() const { return quad_; }
    const SeriesConfig& series() const { return series_; }
    std::string name() const;

private:
    LfiBackend(Kind k, QuadratureConfig q, SeriesConfig s);
    Kind kind_;
    QuadratureConfig quad_;
    SeriesConfig series_;
};

// The weighted integral of f over [a, b] under the chosen realization.
double lfi(const FunctionHandle& f, double a, double b, double alpha,
           const LfiBackend& backend);

// Weighted integral of t^kappa * |1 - 2t|^alpha over [0, 1].
// Operational: binomial-series expansion of the kernel summed termwise
// against anchored moments.  SingularQuadrature: direct integration with a
// split at the kink.  The routes agree at alpha = 1; away from it each
// realization assigns its own value, which the harness reports.
double abs_moment(double kappa, double alpha, const LfiBackend& backend);

// Closed form obtained by integration by parts against the kernel's
// antiderivative:
//   m(kappa) + Gamma(1+alpha) * Gamma(1+kappa)/Gamma(1+kappa+2*alpha)
//              * (2^(1-kappa-alpha) - 2^alpha).
// This is the route the identity machinery (kernel_weighted_integral) is
// built on; at alpha < 1 it differs from the termwise series value.
double abs_moment_closed_form(double kappa, double alpha);

// Termwise binomial-series evaluation with truncation diagnostics.  The
// series converges only algebraically (term ~ i^-(1+2*alpha)), so at small
// alpha the tail bound stays large; 'converged' certifies roughly nine
// digits.
struct AbsMomentSeries {
    double value = 0.0;
    double tail_bound = 0.0;
    int terms_used = 0;
    bool converged = false;
};
AbsMomentSeries abs_moment_series(double kappa, double alpha, const SeriesConfig& cfg);

// Derivative of order alpha at x0.
//   exact   : termwise power rule on the polynomial form (when present);
//   numeric : extrapolated limit of Gamma(1+alpha) (f(x0+h)-f(x0)) / h^alpha
//             over h = 2^-m, with the backward variant reported alongside.
struct LfdResult {
    double value = 0.0;
    double forward = 0.0;
    double backward = 0.0;
    bool converged = false;
    bool exact = false;
};
LfdResult lfd(const FunctionHandle& f, double x0, double alpha);

// Termwise power-rule derivative of a polynomial form.
FractalPoly lfd_exact_poly(const FractalPoly& p);

// Pointwise product, when it stays inside the shifted-power basis.
std::optional<FractalPoly> poly_product(const FractalPoly& f, const FractalPoly& g);

// f(offset + slope * t) as a polynomial in t.
FractalPoly compose_affine(const FractalPoly& f, double offset, double slope);

// Equivalent representation on [a, b]: full-support terms whose shift lies
// outside the interval become one-sided, so reversing compositions stay in
// the basis.
FractalPoly restrict_to_interval(const FractalPoly& f, double a, double b);

// Weighted integral over [0, 1] of g(t) * w(t) where w is the split kernel
//   w(t) = sign_lower * (1-2t)^alpha   on [0, 1/2]
//        = sign_upper * (2t-1)^alpha   on [1/2, 1]
// evaluated termwise by integration by parts (operational realization).
double kernel_weighted_integral(const FractalPoly& g, double alpha, double sign_lower,
                                double sign_upper);

// Checker residuals / slacks for the operator rules.
struct AffineMap {
    double offset = 0.0;
    double slope = 1.0;
};

double check_substitution(const FunctionHandle& f, AffineMap g, double a, double b,
                          double alpha, const LfiBackend& backend);
double check_newton_leibniz(const FunctionHandle& g, double a, double b, double alpha,
                            const LfiBackend& backend);
double check_parts(const FunctionHandle& f, const FunctionHandle& g, double a, double b,
                   double alpha, const LfiBackend& backend);
double check_hoelder(const FunctionHandle& f, const FunctionHandle& g, double a, double b,
                     double alpha, double p, double q, const LfiBackend& backend);

// Gap between the zero-anchored and interval-anchored readings of the power
// antiderivative rule for x^(k*alpha) over [a, b]; they differ for a > 0,
// alpha < 1.
struct ConventionGap {
    double zero_anchored;
    double interval_anchored;
    double gap;
};
ConventionGap moment_convention_gap(double a, double b, double k, double alpha);

} // namespace lfract
