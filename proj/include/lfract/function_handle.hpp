#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lfract/fractal_poly.hpp"

namespace lfract {

// A test function bound to a concrete (alpha, s).  Three flavours:
//   - expression handles: parsed AST, lowered to a FractalPoly when the
//     shape permits (then the exact operational calculus applies);
//   - poly handles: constructed directly from a FractalPoly;
//   - callable handles: opaque evaluators, quadrature backend only.
class FunctionHandle {
public:
    FunctionHandle() = default; // empty handle; eval() throws until assigned

    static FunctionHandle from_expression(std::string_view text, double alpha, double s);
    static FunctionHandle from_poly(FractalPoly poly, std::string text = "<poly>");
    static FunctionHandle from_callable(std::function<double(double)> fn, std::string text,
                                        double alpha, double s,
                                        std::vector<double> kinks = {});

    // Pointwise value; the domain is [0, inf).
    double eval(double x) const;

    bool has_poly() const { return static_cast<bool>(poly_); }
    const FractalPoly& poly() const;
    const std::string& lower_reason() const { return lower_reason_; }

    const ExprPtr& ast() const { return ast_; }
    const std::string& text() const { return text_; }
    double alpha() const { return alpha_; }
    double s() const { return s_; }

    // Points in (a, b) where the function may lose smoothness.
    std::vector<double> kink_points(double a, double b) const;

private:
    ExprPtr ast_;
    std::optional<FractalPoly> poly_;
    std::function<double(double)> fn_;
    std::vector<double> kink_hints_;
    std::string text_;
    std::string lower_reason_;
    double alpha_ = 1.0;
    double s_ = 1.0;
};

} // namespace lfract
