#include "lfract/function_handle.hpp"

#include <algorithm>

#include "lfract/errors.hpp"

namespace lfract {

FunctionHandle FunctionHandle::from_expression(std::string_view text, double alpha, double s) {
    FunctionHandle h;
    h.text_ = std::string(text);
    h.alpha_ = alpha;
    h.s_ = s;
    h.ast_ = parse_expression(text);
    LowerOutcome out = lower_to_poly(h.ast_, alpha, s);
    if (out.poly) {
        h.poly_ = std::move(out.poly);
    } else {
        h.lower_reason_ = out.reason;
    }
    return h;
}

FunctionHandle FunctionHandle::from_poly(FractalPoly poly, std::string text) {
    FunctionHandle h;
    h.alpha_ = poly.alpha;
    h.s_ = poly.s;
    h.text_ = std::move(text);
    h.poly_ = std::move(poly);
    return h;
}

FunctionHandle FunctionHandle::from_callable(std::function<double(double)> fn, std::string text,
                                             double alpha, double s,
                                             std::vector<double> kinks) {
    FunctionHandle h;
    h.fn_ = std::move(fn);
    h.text_ = std::move(text);
    h.alpha_ = alpha;
    h.s_ = s;
    h.kink_hints_ = std::move(kinks);
    h.lower_reason_ = "opaque callable";
    return h;
}

const FractalPoly& FunctionHandle::poly() const {
    if (!poly_) {
        throw CapabilityError("function '" + text_ + "' has no polynomial form: " +
                              lower_reason_);
    }
    return *poly_;
}

double FunctionHandle::eval(double x) const {
    if (x < 0.0) {
        throw DomainError("eval: x must be >= 0, got " + std::to_string(x));
    }
    if (poly_) {
        return poly_->eval(x);
    }
    if (ast_) {
        return eval_expression(ast_, x, alpha_, s_);
    }
    if (!fn_) {
        throw Error("empty function handle");
    }
    return fn_(x);
}

std::vector<double> FunctionHandle::kink_points(double a, double b) const {
    std::vector<double> ks;
    if (poly_) {
        ks = poly_->interior_kinks(a, b);
    }
    for (double k : kink_hints_) {
        if (k > a && k < b) ks.push_back(k);
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

} // namespace lfract
