#include "lfract/fractal_poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lfract/errors.hpp"

namespace lfract {

namespace {

bool is_integer(double v) { return std::nearbyint(v) == v && std::fabs(v) < 1e15; }

double truncated_pow(double base, double expo) {
    // (base)_+^expo with the step convention (x - mu)_+^0 = 1 for x >= mu.
    if (base < 0.0) return 0.0;
    if (base == 0.0) return expo == 0.0 ? 1.0 : 0.0;
    return std::pow(base, expo);
}

// ---------------------------------------------------------------------------
// Parameter expressions as bivariate polynomials in (alpha, s).
// ---------------------------------------------------------------------------

struct ParamPoly {
    // (i, n) -> coefficient of alpha^i * s^n
    std::map<std::pair<int, int>, double> c;

    static ParamPoly constant(double v) {
        ParamPoly p;
        if (v != 0.0) p.c[{0, 0}] = v;
        return p;
    }

    bool constant_value(double* out) const {
        for (const auto& [key, v] : c) {
            if (key != std::pair<int, int>{0, 0} && v != 0.0) return false;
        }
        auto it = c.find({0, 0});
        *out = it == c.end() ? 0.0 : it->second;
        return true;
    }
};

ParamPoly pp_add(const ParamPoly& a, const ParamPoly& b, double sb) {
    ParamPoly r = a;
    for (const auto& [key, v] : b.c) r.c[key] += sb * v;
    return r;
}

ParamPoly pp_mul(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly r;
    for (const auto& [ka, va] : a.c) {
        for (const auto& [kb, vb] : b.c) {
            r.c[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
        }
    }
    return r;
}

// Symbolic view of an x-free exponent; nullopt when the shape is not a
// polynomial in (alpha, s), e.g. division by a parameter.
std::optional<ParamPoly> pp_eval(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Number: return ParamPoly::constant(e->number);
        case ExprKind::Alpha: {
            ParamPoly p;
            p.c[{1, 0}] = 1.0;
            return p;
        }
        case ExprKind::SParam: {
            ParamPoly p;
            p.c[{0, 1}] = 1.0;
            return p;
        }
        case ExprKind::Neg: {
            auto l = pp_eval(e->lhs);
            if (!l) return std::nullopt;
            return pp_add(ParamPoly{}, *l, -1.0);
        }
        case ExprKind::Add:
        case ExprKind::Sub: {
            auto l = pp_eval(e->lhs);
            auto r = pp_eval(e->rhs);
            if (!l || !r) return std::nullopt;
            return pp_add(*l, *r, e->kind == ExprKind::Add ? 1.0 : -1.0);
        }
        case ExprKind::Mul: {
            auto l = pp_eval(e->lhs);
            auto r = pp_eval(e->rhs);
            if (!l || !r) return std::nullopt;
            return pp_mul(*l, *r);
        }
        case ExprKind::Div: {
            auto l = pp_eval(e->lhs);
            auto r = pp_eval(e->rhs);
            if (!l || !r) return std::nullopt;
            double d = 0.0;
            if (!r->constant_value(&d) || d == 0.0) return std::nullopt;
            return pp_add(ParamPoly{}, *l, 1.0 / d);
        }
        default: return std::nullopt;
    }
}

SymbolicExponent exponent_of(const ExprPtr& e, double alpha, double s) {
    if (auto pp = pp_eval(e)) {
        SymbolicExponent se;
        bool in_span = true;
        for (const auto& [key, v] : pp->c) {
            if (v == 0.0) continue;
            if (key == std::pair<int, int>{0, 0}) {
                se.j = v;
            } else if (key == std::pair<int, int>{1, 0}) {
                se.k = v;
            } else if (key == std::pair<int, int>{1, 1}) {
                se.l = v;
            } else {
                in_span = false;
                break;
            }
        }
        if (in_span) return se;
    }
    // Pin numerically at the binding.
    return SymbolicExponent::constant(eval_expression(e, 0.0, alpha, s));
}

// ---------------------------------------------------------------------------
// Lowering
// ---------------------------------------------------------------------------

struct LinComb {
    std::vector<PolyTerm> terms;
    bool ok = true;
    std::string reason;

    static LinComb fail(std::string why) {
        LinComb c;
        c.ok = false;
        c.reason = std::move(why);
        return c;
    }
};

struct Lowerer {
    double alpha;
    double s;

    double kv(const SymbolicExponent& e) const { return e.value(alpha, s); }

    bool is_scalar(const PolyTerm& t) const {
        return t.support == TermSupport::Full && kv(t.exponent) == 0.0;
    }

    LinComb lower(const ExprPtr& e) {
        switch (e->kind) {
            case ExprKind::Number: {
                LinComb c;
                c.terms.push_back({e->number, 0.0, SymbolicExponent::constant(0.0),
                                   TermSupport::Full});
                return c;
            }
            case ExprKind::Variable: {
                LinComb c;
                c.terms.push_back(
                    {1.0, 0.0, SymbolicExponent::constant(1.0), TermSupport::Full});
                return c;
            }
            case ExprKind::Neg: {
                LinComb c = lower(e->lhs);
                for (auto& t : c.terms) t.coeff = -t.coeff;
                return c;
            }
            case ExprKind::Add:
            case ExprKind::Sub: {
                LinComb l = lower(e->lhs);
                if (!l.ok) return l;
                LinComb r = lower(e->rhs);
                if (!r.ok) return r;
                const double sign = e->kind == ExprKind::Add ? 1.0 : -1.0;
                for (auto& t : r.terms) {
                    t.coeff *= sign;
                    l.terms.push_back(t);
                }
                return l;
            }
            case ExprKind::Mul: {
                LinComb l = lower(e->lhs);
                if (!l.ok) return l;
                LinComb r = lower(e->rhs);
                if (!r.ok) return r;
                return multiply(l, r);
            }
            case ExprKind::Pow: return lower_pow(e);
            case ExprKind::Abs: return LinComb::fail("abs(...) is not a shifted power form");
            case ExprKind::Div:
                return LinComb::fail("division outside an exponent");
            case ExprKind::Alpha:
            case ExprKind::SParam:
                return LinComb::fail("parameter used outside an exponent");
        }
        return LinComb::fail("corrupt expression node");
    }

    LinComb multiply(const LinComb& l, const LinComb& r) {
        LinComb out;
        for (const auto& a : l.terms) {
            for (const auto& b : r.terms) {
                if (a.coeff == 0.0 || b.coeff == 0.0) continue;
                if (is_scalar(a)) {
                    PolyTerm t = b;
                    t.coeff *= a.coeff;
                    out.terms.push_back(t);
                } else if (is_scalar(b)) {
                    PolyTerm t = a;
                    t.coeff *= b.coeff;
                    out.terms.push_back(t);
                } else if (a.shift == b.shift && a.support == b.support) {
                    PolyTerm t;
                    t.coeff = a.coeff * b.coeff;
                    t.shift = a.shift;
                    t.exponent = {a.exponent.j + b.exponent.j, a.exponent.k + b.exponent.k,
                                  a.exponent.l + b.exponent.l};
                    t.support = a.support;
                    out.terms.push_back(t);
                } else if (a.shift == b.shift &&
                           (a.support == TermSupport::RightOfShift ||
                            b.support == TermSupport::RightOfShift) &&
                           a.support != TermSupport::LeftOfShift &&
                           b.support != TermSupport::LeftOfShift) {
                    // Full x truncated at the same shift stays truncated.
                    PolyTerm t;
                    t.coeff = a.coeff * b.coeff;
                    t.shift = a.shift;
                    t.exponent = {a.exponent.j + b.exponent.j, a.exponent.k + b.exponent.k,
                                  a.exponent.l + b.exponent.l};
                    t.support = TermSupport::RightOfShift;
                    out.terms.push_back(t);
                } else {
                    return LinComb::fail("product of powers with different shifts");
                }
            }
        }
        return out;
    }

    LinComb lower_pow(const ExprPtr& e) {
        const SymbolicExponent se = exponent_of(e->rhs, alpha, s);
        const double ev = kv(se);
        if (ev <= -1.0) {
            return LinComb::fail("exponent <= -1 is not integrable");
        }

        LinComb base = lower(e->lhs);
        if (!base.ok) return base;
        std::erase_if(base.terms, [](const PolyTerm& t) { return t.coeff == 0.0; });

        // Single-term base: (c (x - mu)^k0)^e.
        if (base.terms.size() == 1) {
            const PolyTerm& t = base.terms[0];
            const double k0 = kv(t.exponent);
            if (t.coeff < 0.0 && !is_integer(ev)) {
                return LinComb::fail("negative coefficient under fractional power");
            }
            PolyTerm out;
            out.coeff = std::pow(t.coeff, ev);
            out.shift = t.shift;
            if (k0 == 1.0 && t.exponent.j == 1.0 && t.exponent.k == 0.0 &&
                t.exponent.l == 0.0) {
                out.exponent = se; // (x - mu)^e keeps the symbolic exponent
            } else {
                double factor = 0.0;
                const auto pp = pp_eval(e->rhs);
                if (pp && pp->constant_value(&factor)) {
                    // numeric outer power scales the symbolic inner exponent
                    out.exponent = {t.exponent.j * factor, t.exponent.k * factor,
                                    t.exponent.l * factor};
                } else {
                    out.exponent = SymbolicExponent::constant(k0 * ev);
                }
            }
            if (kv(out.exponent) <= -1.0) {
                return LinComb::fail("exponent <= -1 is not integrable");
            }
            out.support = support_for(out.shift, t.support);
            LinComb c;
            c.terms.push_back(out);
            return c;
        }

        // Affine base p*x + r, p > 0: rewrite as p^e (x - (-r/p))^e.
        double slope = 0.0;
        double intercept = 0.0;
        for (const auto& t : base.terms) {
            const double k0 = kv(t.exponent);
            if (t.support != TermSupport::Full) {
                return LinComb::fail("truncated base under '^'");
            }
            if (k0 == 0.0) {
                intercept += t.coeff;
            } else if (k0 == 1.0) {
                slope += t.coeff;
                intercept -= t.coeff * t.shift;
            } else {
                return LinComb::fail("base of '^' is not affine or a single power");
            }
        }
        if (slope == 0.0) {
            LinComb c;
            c.terms.push_back({std::pow(intercept, ev), 0.0, SymbolicExponent::constant(0.0),
                               TermSupport::Full});
            return c;
        }
        if (slope < 0.0) {
            return LinComb::fail("decreasing affine base under fractional power");
        }
        PolyTerm out;
        out.coeff = std::pow(slope, ev);
        out.shift = -intercept / slope;
        out.exponent = se;
        out.support = support_for(out.shift, TermSupport::Full);
        LinComb c;
        c.terms.push_back(out);
        return c;
    }

    // Shifted powers with a positive shift are read as truncated powers
    // (zero left of the shift); the fractional-power branch is not
    // real-valued there anyway.
    TermSupport support_for(double shift, TermSupport base_support) const {
        if (base_support == TermSupport::RightOfShift) return TermSupport::RightOfShift;
        if (shift > 0.0) return TermSupport::RightOfShift;
        return TermSupport::Full;
    }
};

} // namespace

double FractalPoly::eval(double x) const {
    double acc = 0.0;
    for (const auto& t : terms) {
        const double kvv = t.exponent.value(alpha, s);
        const double base = x - t.shift;
        switch (t.support) {
            case TermSupport::RightOfShift:
                acc += t.coeff * truncated_pow(base, kvv);
                break;
            case TermSupport::LeftOfShift:
                acc += t.coeff * truncated_pow(-base, kvv);
                break;
            case TermSupport::Full:
                if (base < 0.0 && !is_integer(kvv)) {
                    throw DomainError("full-support term with negative base and fractional "
                                      "exponent");
                }
                acc += t.coeff * (base == 0.0 && kvv == 0.0 ? 1.0 : std::pow(base, kvv));
                break;
        }
    }
    return acc;
}

std::vector<double> FractalPoly::interior_kinks(double a, double b) const {
    std::vector<double> ks;
    for (const auto& t : terms) {
        if (t.support != TermSupport::Full && t.shift > a && t.shift < b) {
            ks.push_back(t.shift);
        }
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

FractalPoly FractalPoly::scaled(double c) const {
    FractalPoly p = *this;
    for (auto& t : p.terms) t.coeff *= c;
    return p;
}

LowerOutcome lower_to_poly(const ExprPtr& ast, double alpha, double s) {
    Lowerer lw{alpha, s};
    LinComb c = lw.lower(ast);
    if (!c.ok) {
        return {std::nullopt, c.reason};
    }
    // Merge identical (shift, exponent, support) terms, drop zeros.
    FractalPoly poly;
    poly.alpha = alpha;
    poly.s = s;
    for (const auto& t : c.terms) {
        if (t.coeff == 0.0) continue;
        bool merged = false;
        for (auto& u : poly.terms) {
            if (u.shift == t.shift && u.support == t.support &&
                u.exponent.value(alpha, s) == t.exponent.value(alpha, s)) {
                u.coeff += t.coeff;
                merged = true;
                break;
            }
        }
        if (!merged) poly.terms.push_back(t);
    }
    std::erase_if(poly.terms, [](const PolyTerm& t) { return t.coeff == 0.0; });
    return {poly, ""};
}

} // namespace lfract
