#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lfract/expr.hpp"

namespace lfract {

// Exponent of the form kappa(alpha, s) = j + k*alpha + l*alpha*s.
// Exponents outside this span (but still x-free) are pinned numerically at
// the binding used for lowering: kappa = (value, 0, 0).
struct SymbolicExponent {
    double j = 0.0;
    double k = 0.0;
    double l = 0.0;

    double value(double alpha, double s) const { return j + k * alpha + l * alpha * s; }

    static SymbolicExponent constant(double v) { return {v, 0.0, 0.0}; }
};

enum class TermSupport {
    Full,         // defined for all x in the domain
    RightOfShift, // zero for x < shift (truncated power)
    LeftOfShift,  // zero for x > shift (mirror form used by internal kernels)
};

// One term c * (x - mu)^kappa with a support flag.
struct PolyTerm {
    double coeff = 0.0;
    double shift = 0.0;
    SymbolicExponent exponent;
    TermSupport support = TermSupport::Full;
};

// Linear combination of shifted power terms, bound to a concrete (alpha, s).
struct FractalPoly {
    std::vector<PolyTerm> terms;
    double alpha = 1.0;
    double s = 1.0;

    double eval(double x) const;

    // Shift points of truncated terms falling strictly inside (a, b).
    std::vector<double> interior_kinks(double a, double b) const;

    FractalPoly scaled(double c) const;
};

struct LowerOutcome {
    std::optional<FractalPoly> poly; // empty => not a fractal polynomial
    std::string reason;              // why lowering failed, when it did
};

// Lower an AST to the normal form at the given parameter binding.  Returns
// NotPolynomial (empty poly + reason) for shapes outside the basis, e.g.
// abs(...) composites; such functions can only use the quadrature backend.
LowerOutcome lower_to_poly(const ExprPtr& ast, double alpha, double s);

} // namespace lfract
