#pragma once

#include <cmath>
#include <string>

#include "lfract/errors.hpp"

namespace lfract {

// An element a^alpha of the fractal line, stored by its base pre-image a.
// Addition and multiplication act on bases, so the fractal identities
// (commutativity, associativity, distributivity, neutral elements) hold
// exactly up to base-arithmetic rounding.  Negative bases use the signed
// power convention sign(a)|a|^alpha so additive inverses exist.
class FractalNumber {
public:
    FractalNumber(double base, double alpha) : base_(base), alpha_(alpha) {
        if (!(alpha > 0.0) || alpha > 1.0 || !std::isfinite(alpha)) {
            throw DomainError("FractalNumber: alpha must lie in (0, 1], got " +
                              std::to_string(alpha));
        }
        if (!std::isfinite(base)) {
            throw DomainError("FractalNumber: base must be finite");
        }
    }

    static FractalNumber zero(double alpha) { return FractalNumber(0.0, alpha); }
    static FractalNumber one(double alpha) { return FractalNumber(1.0, alpha); }

    double base() const { return base_; }
    double alpha() const { return alpha_; }

    // Image in the reals: sign(base) * |base|^alpha.
    double real_value() const {
        if (base_ == 0.0) return 0.0;
        return std::copysign(std::pow(std::fabs(base_), alpha_), base_);
    }

    friend FractalNumber operator+(const FractalNumber& x, const FractalNumber& y) {
        require_same_alpha(x, y, "+");
        return FractalNumber(x.base_ + y.base_, x.alpha_);
    }

    friend FractalNumber operator*(const FractalNumber& x, const FractalNumber& y) {
        require_same_alpha(x, y, "*");
        return FractalNumber(x.base_ * y.base_, x.alpha_);
    }

    friend FractalNumber operator-(const FractalNumber& x) {
        return FractalNumber(-x.base_, x.alpha_);
    }

    friend FractalNumber operator-(const FractalNumber& x, const FractalNumber& y) {
        require_same_alpha(x, y, "-");
        return FractalNumber(x.base_ - y.base_, x.alpha_);
    }

    friend bool operator==(const FractalNumber& x, const FractalNumber& y) {
        require_same_alpha(x, y, "==");
        return x.base_ == y.base_;
    }

    // Base-wise order; consistent with every inequality use downstream.
    friend bool operator<(const FractalNumber& x, const FractalNumber& y) {
        require_same_alpha(x, y, "<");
        return x.base_ < y.base_;
    }
    friend bool operator<=(const FractalNumber& x, const FractalNumber& y) {
        return x < y || x == y;
    }

private:
    static void require_same_alpha(const FractalNumber& x, const FractalNumber& y,
                                   const char* op) {
        if (x.alpha_ != y.alpha_) {
            throw CompositionError(std::string("fractal '") + op +
                                   "': operands carry different alpha contexts");
        }
    }

    double base_;
    double alpha_;
};

} // namespace lfract
