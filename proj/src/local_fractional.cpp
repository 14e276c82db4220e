#include "lfract/local_fractional.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "lfract/errors.hpp"
#include "lfract/special_functions.hpp"

namespace lfract {

namespace {

using special::gamma;
using special::gamma_ratio;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_integer(double v) { return std::nearbyint(v) == v && std::fabs(v) < 1e15; }

// Truncated power: zero for non-positive base, with (0)^0 = 1.
double pow0(double base, double e) {
    if (base <= 0.0) return (base == 0.0 && e == 0.0) ? 1.0 : 0.0;
    return std::pow(base, e);
}

void require_interval(double a, double b) {
    if (!(a >= 0.0) || !(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integration interval must satisfy 0 <= a < b");
    }
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0 || !std::isfinite(alpha)) {
        throw DomainError("alpha must lie in (0, 1]");
    }
}

// ---------------------------------------------------------------------------
// Composite Gauss-Legendre on a graded mesh
// ---------------------------------------------------------------------------

constexpr std::array<double, 4> kGaussX = {
    0.18343464249564980494,
    0.52553240991632898582,
    0.79666647741362673959,
    0.96028985649753623168,
};
constexpr std::array<double, 4> kGaussW = {
    0.36268378337836198297,
    0.31370664587788728734,
    0.22238103445337447054,
    0.10122853629037625915,
};

template <typename F>
double gauss8(F&& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        acc += kGaussW[i] * (f(c + h * kGaussX[i]) + f(c - h * kGaussX[i]));
    }
    return acc * h;
}

// Cells clustered at both endpoints with the given grading exponent; the
// strong clustering eats algebraic endpoint behaviour of the integrand.
template <typename F>
double graded_composite(F&& f, double lo, double hi, int cells, double grading) {
    if (hi <= lo) return 0.0;
    auto knot = [&](int i) {
        const double w = static_cast<double>(i) / cells;
        const double xi = w <= 0.5 ? 0.5 * std::pow(2.0 * w, grading)
                                   : 1.0 - 0.5 * std::pow(2.0 * (1.0 - w), grading);
        return lo + (hi - lo) * xi;
    };
    double acc = 0.0;
    double prev = lo;
    for (int i = 1; i <= cells; ++i) {
        const double next = i == cells ? hi : knot(i);
        if (next > prev) acc += gauss8(f, prev, next);
        prev = next;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Singular-kernel quadrature
// ---------------------------------------------------------------------------

// integral over [p, q] of f(t) (b - t)^(alpha-1) dt where q may touch b.
// On the singular panel the substitution u = (b - t)^alpha absorbs the
// kernel exactly; in t-space this clusters nodes at b with exponent 1/alpha.
double panel_right_kernel(const std::function<double(double)>& f, double p, double q, double b,
                          bool touches_singularity, double alpha,
                          const QuadratureConfig& cfg) {
    const int cells = std::max(1, cfg.nodes_per_panel / 8);
    if (touches_singularity) {
        const double upper = std::pow(b - p, alpha);
        auto h = [&](double u) { return f(b - std::pow(u, 1.0 / alpha)); };
        return graded_composite(h, 0.0, upper, cells, cfg.mesh_grading) / alpha;
    }
    auto h = [&](double t) { return f(t) * std::pow(b - t, alpha - 1.0); };
    return graded_composite(h, p, q, cells, cfg.mesh_grading);
}

double panel_left_kernel(const std::function<double(double)>& f, double p, double q, double a,
                         bool touches_singularity, double alpha,
                         const QuadratureConfig& cfg) {
    const int cells = std::max(1, cfg.nodes_per_panel / 8);
    if (touches_singularity) {
        const double upper = std::pow(q - a, alpha);
        auto h = [&](double u) { return f(a + std::pow(u, 1.0 / alpha)); };
        return graded_composite(h, 0.0, upper, cells, cfg.mesh_grading) / alpha;
    }
    auto h = [&](double t) { return f(t) * std::pow(t - a, alpha - 1.0); };
    return graded_composite(h, p, q, cells, cfg.mesh_grading);
}

std::vector<double> panel_bounds(const FunctionHandle& f, double a, double b) {
    std::vector<double> bounds = f.kink_points(a, b);
    bounds.insert(bounds.begin(), a);
    bounds.push_back(b);
    return bounds;
}

double quadrature_lfi_one_sided(const FunctionHandle& f, double a, double b, double alpha,
                                const QuadratureConfig& cfg, bool right_kernel) {
    const auto bounds = panel_bounds(f, a, b);
    auto fv = [&](double t) { return f.eval(std::clamp(t, a, b)); };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double p = bounds[i];
        const double q = bounds[i + 1];
        if (right_kernel) {
            acc += panel_right_kernel(fv, p, q, b, i + 2 == bounds.size(), alpha, cfg);
        } else {
            acc += panel_left_kernel(fv, p, q, a, i == 0, alpha, cfg);
        }
    }
    return acc / gamma(alpha);
}

double quadrature_lfi(const FunctionHandle& f, double a, double b, double alpha,
                      const QuadratureConfig& cfg) {
    switch (cfg.kernel_side) {
        case KernelSide::Right:
            return quadrature_lfi_one_sided(f, a, b, alpha, cfg, true);
        case KernelSide::Left:
            return quadrature_lfi_one_sided(f, a, b, alpha, cfg, false);
        case KernelSide::Symmetric:
            return 0.5 * (quadrature_lfi_one_sided(f, a, b, alpha, cfg, true) +
                          quadrature_lfi_one_sided(f, a, b, alpha, cfg, false));
    }
    throw ConfigError("invalid kernel side");
}

// ---------------------------------------------------------------------------
// Operational backend: anchored closed-form moments
// ---------------------------------------------------------------------------

double term_exponent(const PolyTerm& t, const FractalPoly& p) {
    return t.exponent.value(p.alpha, p.s);
}

double operational_term_lfi(const PolyTerm& t, double kv, double a, double b, double alpha) {
    if (kv <= -1.0) {
        throw DomainError("term exponent must exceed -1 for integrability");
    }
    const double mk = moment({kv, alpha});
    switch (t.support) {
        case TermSupport::RightOfShift: {
            if (t.shift >= b) return 0.0;
            const double lo = std::max(a, t.shift);
            return t.coeff * mk *
                   (pow0(b - t.shift, kv + alpha) - pow0(lo - t.shift, kv + alpha));
        }
        case TermSupport::LeftOfShift: {
            if (t.shift <= a) return 0.0;
            const double hi = std::min(b, t.shift);
            return t.coeff * mk *
                   (pow0(t.shift - a, kv + alpha) - pow0(t.shift - hi, kv + alpha));
        }
        case TermSupport::Full: {
            if (kv == 0.0) {
                // Constants are translation invariant: anchor at a.
                return t.coeff * mk * std::pow(b - a, alpha);
            }
            if (t.shift <= a) {
                return t.coeff * mk *
                       (pow0(b - t.shift, kv + alpha) - pow0(a - t.shift, kv + alpha));
            }
            if (is_integer(kv)) {
                const double sgn = std::llround(kv) % 2 == 0 ? 1.0 : -1.0;
                if (t.shift >= b) {
                    return t.coeff * sgn * mk *
                           (pow0(t.shift - a, kv + alpha) - pow0(t.shift - b, kv + alpha));
                }
                const double left = sgn * mk * pow0(t.shift - a, kv + alpha);
                const double right = mk * pow0(b - t.shift, kv + alpha);
                return t.coeff * (left + right);
            }
            throw CapabilityError(
                "operational backend: full-support fractional power with shift inside the "
                "interval");
        }
    }
    throw Error("operational_term_lfi: corrupt term");
}

double operational_lfi(const FractalPoly& p, double a, double b, double alpha) {
    if (std::fabs(p.alpha - alpha) > 1e-12) {
        throw ConfigError("function handle is bound to a different alpha than the integral");
    }
    double acc = 0.0;
    for (const auto& t : p.terms) {
        acc += operational_term_lfi(t, term_exponent(t, p), a, b, alpha);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Numeric derivative: difference quotients + iterated Aitken extrapolation
// ---------------------------------------------------------------------------

double aitken_extrapolate(std::vector<double> v) {
    while (v.size() >= 3) {
        std::vector<double> next;
        for (std::size_t i = 0; i + 2 < v.size(); ++i) {
            const double d2 = v[i + 2] - 2.0 * v[i + 1] + v[i];
            if (d2 == 0.0) {
                next.push_back(v[i + 2]);
            } else {
                const double d1 = v[i + 2] - v[i + 1];
                next.push_back(v[i + 2] - d1 * d1 / d2);
            }
        }
        v = std::move(next);
    }
    return v.back();
}

std::vector<double> tail6(const std::vector<double>& v) {
    const std::size_t n = v.size() > 6 ? v.size() - 6 : 0;
    return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(n), v.end());
}

LfdResult lfd_numeric(const FunctionHandle& f, double x0, double alpha) {
    LfdResult r;
    const double g1a = gamma(1.0 + alpha);
    const double f0 = f.eval(x0);
    std::vector<double> fw;
    std::vector<double> bw;
    double prev = kNaN;
    for (int m = 4; m <= 40; ++m) {
        const double h = std::ldexp(1.0, -m);
        const double fh = f.eval(x0 + h);
        if (std::fabs(fh - f0) < 64.0 * 1e-16 * std::fabs(f0) && m > 16) {
            break; // difference below the cancellation floor
        }
        fw.push_back(g1a * (fh - f0) / std::pow(h, alpha));
        if (x0 - h >= 0.0) {
            bw.push_back(g1a * (f0 - f.eval(x0 - h)) / std::pow(h, alpha));
        }
        if (fw.size() >= 6) {
            const double ex = aitken_extrapolate(tail6(fw));
            if (std::isfinite(prev) &&
                std::fabs(ex - prev) < 1e-7 * std::max(1.0, std::fabs(ex))) {
                r.converged = true;
                prev = ex;
                break;
            }
            prev = ex;
        }
    }
    // A diverging raw sequence can still have stable extrapolants (Aitken
    // maps growing geometric sequences to their anti-limit); require the raw
    // quotients to stay near the extrapolated value.
    if (r.converged && !fw.empty() &&
        std::fabs(fw.back()) > 10.0 * (1.0 + std::fabs(prev))) {
        r.converged = false;
    }
    r.forward = std::isfinite(prev) ? prev : (fw.empty() ? kNaN : fw.back());
    r.backward = bw.size() >= 6 ? aitken_extrapolate(tail6(bw)) : (bw.empty() ? kNaN : bw.back());
    r.value = r.forward;
    r.exact = false;
    return r;
}

// ---------------------------------------------------------------------------
// Split-kernel terms
// ---------------------------------------------------------------------------

struct CanonTerm {
    double coeff;
    double nu;
    double kv;
    bool left; // true: coeff*(nu-t)_+^kv, false: coeff*(t-nu)_+^kv
};

std::vector<CanonTerm> canonicalize_on_unit(const FractalPoly& g) {
    std::vector<CanonTerm> out;
    for (const auto& t : g.terms) {
        const double kv = t.exponent.value(g.alpha, g.s);
        if (kv <= -1.0) {
            throw DomainError("term exponent must exceed -1");
        }
        switch (t.support) {
            case TermSupport::RightOfShift:
                out.push_back({t.coeff, t.shift, kv, false});
                break;
            case TermSupport::LeftOfShift:
                out.push_back({t.coeff, t.shift, kv, true});
                break;
            case TermSupport::Full:
                if (kv == 0.0) {
                    // The split-kernel value of a constant depends on its
                    // anchoring; keep the orientation the term carries.
                    // Constants produced by reversing compositions arrive
                    // with shift >= 1 and must stay left-anchored there.
                    if (t.shift >= 1.0) {
                        out.push_back({t.coeff, t.shift, 0.0, true});
                    } else if (t.shift <= 0.0) {
                        out.push_back({t.coeff, t.shift, 0.0, false});
                    } else {
                        throw CapabilityError(
                            "constant term with interior anchor: orientation is "
                            "ambiguous under the split kernel");
                    }
                } else if (t.shift <= 0.0) {
                    out.push_back({t.coeff, t.shift, kv, false});
                } else if (t.shift >= 1.0) {
                    if (!is_integer(kv)) {
                        throw CapabilityError(
                            "full-support fractional power with shift beyond the unit "
                            "interval");
                    }
                    const double sgn = std::llround(kv) % 2 == 0 ? 1.0 : -1.0;
                    out.push_back({t.coeff * sgn, t.shift, kv, true});
                } else {
                    if (!is_integer(kv)) {
                        throw CapabilityError(
                            "full-support fractional power with interior shift");
                    }
                    const double sgn = std::llround(kv) % 2 == 0 ? 1.0 : -1.0;
                    out.push_back({t.coeff * sgn, t.shift, kv, true});
                    out.push_back({t.coeff, t.shift, kv, false});
                }
                break;
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Public surface
// ---------------------------------------------------------------------------

double moment(MomentKey key) {
    require_alpha(key.alpha);
    if (!(key.kappa > -1.0)) {
        throw DomainError("moment: kappa must exceed -1, got " + std::to_string(key.kappa));
    }
    return gamma_ratio(1.0 + key.kappa, 1.0 + key.kappa + key.alpha);
}

LfiBackend::LfiBackend(Kind k, QuadratureConfig q, SeriesConfig s)
    : kind_(k), quad_(q), series_(s) {
    if (q.nodes_per_panel < 8) {
        throw ConfigError("quadrature node count must be >= 8");
    }
    if (!(q.mesh_grading > 0.0)) {
        throw ConfigError("mesh grading exponent must be positive");
    }
    if (s.max_terms < 16) {
        throw ConfigError("series truncation must be >= 16");
    }
    if (!(s.tolerance > 0.0)) {
        throw ConfigError("series tolerance must be positive");
    }
}

LfiBackend LfiBackend::operational(SeriesConfig series) {
    return LfiBackend(Kind::Operational, QuadratureConfig{}, series);
}

LfiBackend LfiBackend::singular_quadrature(QuadratureConfig quad) {
    return LfiBackend(Kind::SingularQuadrature, quad, SeriesConfig{});
}

std::string LfiBackend::name() const {
    return kind_ == Kind::Operational ? "operational" : "quadrature";
}

double lfi(const FunctionHandle& f, double a, double b, double alpha,
           const LfiBackend& backend) {
    require_interval(a, b);
    require_alpha(alpha);
    if (backend.kind() == LfiBackend::Kind::Operational) {
        return operational_lfi(f.poly(), a, b, alpha);
    }
    return quadrature_lfi(f, a, b, alpha, backend.quadrature());
}

double abs_moment_closed_form(double kappa, double alpha) {
    require_alpha(alpha);
    if (!(kappa > -1.0)) {
        throw DomainError("abs_moment: kappa must exceed -1");
    }
    const double mk = moment({kappa, alpha});
    const double ratio2 = gamma_ratio(1.0 + kappa, 1.0 + kappa + 2.0 * alpha);
    return mk + gamma(1.0 + alpha) * ratio2 *
                    (std::pow(2.0, 1.0 - kappa - alpha) - std::pow(2.0, alpha));
}

double abs_moment(double kappa, double alpha, const LfiBackend& backend) {
    require_alpha(alpha);
    if (!(kappa > -1.0)) {
        throw DomainError("abs_moment: kappa must exceed -1");
    }
    if (backend.kind() == LfiBackend::Kind::Operational) {
        return abs_moment_series(kappa, alpha, backend.series()).value;
    }
    auto fn = [kappa, alpha](double t) {
        return pow0(t, kappa) * std::pow(std::fabs(1.0 - 2.0 * t), alpha);
    };
    const FunctionHandle h =
        FunctionHandle::from_callable(fn, "t^kappa*|1-2t|^alpha", alpha, 1.0, {0.5});
    return quadrature_lfi(h, 0.0, 1.0, alpha, backend.quadrature());
}

AbsMomentSeries abs_moment_series(double kappa, double alpha, const SeriesConfig& cfg) {
    require_alpha(alpha);
    if (!(kappa > -1.0)) {
        throw DomainError("abs_moment_series: kappa must exceed -1");
    }
    // Lower piece: expand (1-2t)^alpha about t = 0; upper piece: translate to
    // t = 1/2 + u and expand (1+2u)^kappa.  Both reduce to sums of plain
    // moments.  Terms decay only algebraically (i^-(1+2*alpha) respectively
    // i^-(1+kappa+alpha)); at small exponents the tolerance may stay out of
    // reach within max_terms, which the tail bound and 'converged' report.
    AbsMomentSeries out;
    const double scale = std::pow(2.0, -kappa - alpha);

    // sum_{i>=0} C(alpha,i)(-1)^i m(kappa+i); all terms share one sign from
    // i = 1 on, so |tail after N| <= m(kappa+N) |C(alpha-1, N-1)| by the
    // partial-sum identity sum_{i=0}^{n} (-1)^i C(b,i) = (-1)^n C(b-1,n).
    // The moment factor advances by the recurrence
    // m(k+1) = m(k) (1+k)/(1+k+alpha), so terms cost no Gamma evaluations.
    double lower_sum = 0.0;
    double lower_tail = 0.0;
    int lower_terms = 0;
    {
        double binom = 1.0;   // C(alpha, i) (-1)^i
        double partial = 1.0; // C(alpha-1, i) (-1)^i
        double prev_partial = 1.0;
        double mk = moment({kappa, alpha});
        for (int i = 0; i < cfg.max_terms; ++i) {
            const double term = binom * mk;
            lower_sum += term;
            lower_terms = i + 1;
            prev_partial = partial;
            binom *= -(alpha - i) / (i + 1.0);
            partial *= -(alpha - 1.0 - i) / (i + 1.0);
            mk *= (1.0 + kappa + i) / (1.0 + kappa + i + alpha);
            if (binom == 0.0) {
                prev_partial = 0.0; // alpha = 1: the expansion terminates
                break;
            }
            if (i > 2 && std::fabs(term) < cfg.tolerance) break;
        }
        lower_tail = std::fabs(prev_partial) * moment({kappa + lower_terms, alpha});
    }

    // sum_{j>=0} C(kappa,j) m(alpha+j); signs alternate from j = 1 on with
    // decreasing magnitude, so adding half of the first omitted term halves
    // the rigorous tail bound |C(kappa,N)| m(alpha+N).
    double upper_sum = 0.0;
    double upper_tail = 0.0;
    int upper_terms = 0;
    {
        double binom = 1.0; // C(kappa, j)
        double mj = moment({alpha, alpha});
        bool terminated = false;
        for (int j = 0; j < cfg.max_terms; ++j) {
            const double term = binom * mj;
            upper_sum += term;
            upper_terms = j + 1;
            binom *= (kappa - j) / (j + 1.0);
            mj *= (1.0 + alpha + j) / (1.0 + 2.0 * alpha + j);
            if (binom == 0.0) {
                terminated = true; // integer kappa
                break;
            }
            if (j > 2 && std::fabs(term) < cfg.tolerance) break;
        }
        if (!terminated) {
            const double omitted = binom * mj;
            upper_sum += 0.5 * omitted;
            upper_tail = 0.5 * std::fabs(omitted);
        }
    }

    out.value = scale * (lower_sum + upper_sum);
    out.terms_used = std::max(lower_terms, upper_terms);
    out.tail_bound = scale * (lower_tail + upper_tail);
    // trustworthy to roughly nine digits when flagged converged
    out.converged = out.tail_bound <= 1e-9 * std::max(1.0, std::fabs(out.value));
    return out;
}

FractalPoly lfd_exact_poly(const FractalPoly& p) {
    FractalPoly d;
    d.alpha = p.alpha;
    d.s = p.s;
    for (const auto& t : p.terms) {
        const double kv = t.exponent.value(p.alpha, p.s);
        if (kv == 0.0) continue; // constants differentiate to zero
        if (!(kv > 0.0)) {
            throw DomainError("power-rule derivative requires a positive exponent");
        }
        PolyTerm dt = t;
        const double ratio = gamma_ratio(1.0 + kv, 1.0 + kv - p.alpha);
        dt.coeff = t.coeff * ratio * (t.support == TermSupport::LeftOfShift ? -1.0 : 1.0);
        dt.exponent = {t.exponent.j, t.exponent.k - 1.0, t.exponent.l};
        d.terms.push_back(dt);
    }
    return d;
}

LfdResult lfd(const FunctionHandle& f, double x0, double alpha) {
    require_alpha(alpha);
    if (x0 < 0.0) {
        throw DomainError("lfd: x0 must be >= 0");
    }
    if (f.has_poly()) {
        if (std::fabs(f.poly().alpha - alpha) > 1e-12) {
            throw ConfigError("function handle is bound to a different alpha");
        }
        LfdResult r;
        r.value = lfd_exact_poly(f.poly()).eval(x0);
        r.forward = r.value;
        r.backward = r.value;
        r.converged = true;
        r.exact = true;
        return r;
    }
    return lfd_numeric(f, x0, alpha);
}

std::optional<FractalPoly> poly_product(const FractalPoly& f, const FractalPoly& g) {
    if (std::fabs(f.alpha - g.alpha) > 1e-12 || std::fabs(f.s - g.s) > 1e-12) {
        return std::nullopt;
    }
    FractalPoly out;
    out.alpha = f.alpha;
    out.s = f.s;
    auto kv = [&](const PolyTerm& t) { return t.exponent.value(f.alpha, f.s); };
    auto scalar = [&](const PolyTerm& t) {
        return t.support == TermSupport::Full && kv(t) == 0.0;
    };
    for (const auto& a : f.terms) {
        for (const auto& b : g.terms) {
            if (a.coeff == 0.0 || b.coeff == 0.0) continue;
            if (scalar(a)) {
                PolyTerm t = b;
                t.coeff *= a.coeff;
                out.terms.push_back(t);
            } else if (scalar(b)) {
                PolyTerm t = a;
                t.coeff *= b.coeff;
                out.terms.push_back(t);
            } else if (a.shift == b.shift) {
                if ((a.support == TermSupport::RightOfShift &&
                     b.support == TermSupport::LeftOfShift) ||
                    (a.support == TermSupport::LeftOfShift &&
                     b.support == TermSupport::RightOfShift)) {
                    continue; // disjoint supports: the product vanishes
                }
                PolyTerm t;
                t.coeff = a.coeff * b.coeff;
                t.shift = a.shift;
                t.exponent = {a.exponent.j + b.exponent.j, a.exponent.k + b.exponent.k,
                              a.exponent.l + b.exponent.l};
                if (a.support == b.support) {
                    t.support = a.support;
                } else if (a.support == TermSupport::Full) {
                    t.support = b.support;
                } else if (b.support == TermSupport::Full) {
                    t.support = a.support;
                }
                out.terms.push_back(t);
            } else {
                return std::nullopt;
            }
        }
    }
    return out;
}

FractalPoly restrict_to_interval(const FractalPoly& f, double a, double b) {
    FractalPoly out;
    out.alpha = f.alpha;
    out.s = f.s;
    for (const auto& t : f.terms) {
        const double kv = t.exponent.value(f.alpha, f.s);
        PolyTerm nt = t;
        if (t.support == TermSupport::Full && kv != 0.0) {
            if (t.shift <= a) {
                nt.support = TermSupport::RightOfShift;
            } else if (t.shift >= b && is_integer(kv)) {
                nt.support = TermSupport::LeftOfShift;
                nt.coeff = t.coeff * (std::llround(kv) % 2 == 0 ? 1.0 : -1.0);
            } else if (t.shift > a && t.shift < b && is_integer(kv)) {
                // split at the shift into mirrored one-sided halves
                PolyTerm left = t;
                left.support = TermSupport::LeftOfShift;
                left.coeff = t.coeff * (std::llround(kv) % 2 == 0 ? 1.0 : -1.0);
                out.terms.push_back(left);
                nt.support = TermSupport::RightOfShift;
            } else if (!is_integer(kv)) {
                throw CapabilityError(
                    "full-support fractional power is not real-valued on the interval");
            }
        }
        out.terms.push_back(nt);
    }
    return out;
}

FractalPoly compose_affine(const FractalPoly& f, double offset, double slope) {
    if (slope == 0.0) {
        throw ConfigError("compose_affine: slope must be nonzero");
    }
    FractalPoly out;
    out.alpha = f.alpha;
    out.s = f.s;
    for (const auto& t : f.terms) {
        const double kv = t.exponent.value(f.alpha, f.s);
        PolyTerm nt = t;
        nt.shift = (t.shift - offset) / slope;
        if (slope > 0.0) {
            nt.coeff = t.coeff * std::pow(slope, kv);
        } else {
            if (t.support == TermSupport::Full && !is_integer(kv) && kv != 0.0) {
                throw CapabilityError(
                    "compose_affine: reversing map on a full-support fractional power");
            }
            if (t.support == TermSupport::Full) {
                nt.coeff = t.coeff * std::pow(slope, kv);
            } else {
                nt.coeff = t.coeff * std::pow(-slope, kv);
                nt.support = t.support == TermSupport::RightOfShift
                                 ? TermSupport::LeftOfShift
                                 : TermSupport::RightOfShift;
            }
        }
        out.terms.push_back(nt);
    }
    return out;
}

double kernel_weighted_integral(const FractalPoly& g, double alpha, double sign_lower,
                                double sign_upper) {
    require_alpha(alpha);
    const double g1a = gamma(1.0 + alpha);
    const double two_a = std::pow(2.0, alpha);
    double total = 0.0;
    for (const auto& ct : canonicalize_on_unit(g)) {
        const double mk = moment({ct.kv, alpha});
        const double mk2 = moment({ct.kv + alpha, alpha});
        for (int piece = 0; piece < 2; ++piece) {
            double p = piece == 0 ? 0.0 : 0.5;
            double q = piece == 0 ? 0.5 : 1.0;
            const double contrib_sign = piece == 0 ? sign_lower : sign_upper;
            const double sigma = piece == 0 ? -1.0 : 1.0; // sign of the kernel derivative
            auto kernel = [&](double t) {
                return piece == 0 ? pow0(1.0 - 2.0 * t, alpha) : pow0(2.0 * t - 1.0, alpha);
            };
            double value = 0.0;
            if (!ct.left) {
                p = std::max(p, ct.nu);
                if (p >= q) continue;
                const double boundary =
                    mk * (pow0(q - ct.nu, ct.kv + alpha) * kernel(q) -
                          pow0(p - ct.nu, ct.kv + alpha) * kernel(p));
                const double interior =
                    mk * mk2 *
                    (pow0(q - ct.nu, ct.kv + 2.0 * alpha) - pow0(p - ct.nu, ct.kv + 2.0 * alpha));
                value = boundary - sigma * two_a * g1a * interior;
            } else {
                q = std::min(q, ct.nu);
                if (p >= q) continue;
                const double boundary =
                    -mk * (pow0(ct.nu - q, ct.kv + alpha) * kernel(q) -
                           pow0(ct.nu - p, ct.kv + alpha) * kernel(p));
                const double interior =
                    mk * mk2 *
                    (pow0(ct.nu - q, ct.kv + 2.0 * alpha) - pow0(ct.nu - p, ct.kv + 2.0 * alpha));
                value = boundary - sigma * two_a * g1a * interior;
            }
            total += ct.coeff * contrib_sign * value;
        }
    }
    return total;
}

double check_substitution(const FunctionHandle& f, AffineMap g, double a, double b,
                          double alpha, const LfiBackend& backend) {
    require_interval(a, b);
    require_alpha(alpha);
    if (g.slope == 0.0) {
        throw ConfigError("check_substitution: affine map must have nonzero slope");
    }
    const double ga = g.offset + g.slope * a;
    const double gb = g.offset + g.slope * b;
    const double lo = std::min(ga, gb);
    const double hi = std::max(ga, gb);
    const double target = lfi(f, lo, hi, alpha, backend);

    const double jac = std::pow(std::fabs(g.slope), alpha);
    double source = 0.0;
    if (f.has_poly()) {
        const FractalPoly composed =
            compose_affine(restrict_to_interval(f.poly(), lo, hi), g.offset, g.slope);
        source = jac * lfi(FunctionHandle::from_poly(composed, "composed"), a, b, alpha,
                           backend);
    } else {
        auto fn = [f, g](double t) { return f.eval(g.offset + g.slope * t); };
        std::vector<double> kinks;
        for (double k : f.kink_points(lo, hi)) {
            kinks.push_back((k - g.offset) / g.slope);
        }
        source = jac * lfi(FunctionHandle::from_callable(fn, "composed", alpha, f.s(), kinks),
                           a, b, alpha, backend);
    }
    return std::fabs(target - source);
}

double check_newton_leibniz(const FunctionHandle& g, double a, double b, double alpha,
                            const LfiBackend& backend) {
    require_interval(a, b);
    require_alpha(alpha);
    const FractalPoly deriv = lfd_exact_poly(g.poly());
    const double integral =
        lfi(FunctionHandle::from_poly(deriv, "derivative"), a, b, alpha, backend);
    const double difference = g.eval(b) - g.eval(a);
    return std::fabs(integral - difference);
}

double check_parts(const FunctionHandle& f, const FunctionHandle& g, double a, double b,
                   double alpha, const LfiBackend& backend) {
    require_interval(a, b);
    require_alpha(alpha);
    const FractalPoly fd = lfd_exact_poly(f.poly());
    const FractalPoly gd = lfd_exact_poly(g.poly());

    auto integral_of_product = [&](const FractalPoly& u, const FractalPoly& v) {
        if (backend.kind() == LfiBackend::Kind::Operational) {
            auto prod = poly_product(u, v);
            if (!prod) {
                throw CapabilityError(
                    "check_parts: product leaves the shifted-power basis; use the "
                    "quadrature backend");
            }
            return lfi(FunctionHandle::from_poly(*prod, "product"), a, b, alpha, backend);
        }
        auto fn = [u, v](double t) { return u.eval(t) * v.eval(t); };
        std::vector<double> kinks = u.interior_kinks(a, b);
        for (double k : v.interior_kinks(a, b)) kinks.push_back(k);
        return lfi(FunctionHandle::from_callable(fn, "product", alpha, f.s(), kinks), a, b,
                   alpha, backend);
    };

    const double lhs = integral_of_product(f.poly(), gd);
    const double boundary = f.eval(b) * g.eval(b) - f.eval(a) * g.eval(a);
    const double rhs = integral_of_product(fd, g.poly());
    return std::fabs(lhs - boundary + rhs);
}

double check_hoelder(const FunctionHandle& f, const FunctionHandle& g, double a, double b,
                     double alpha, double p, double q, const LfiBackend& backend) {
    require_interval(a, b);
    require_alpha(alpha);
    if (!(p > 1.0) || !(q > 1.0) || std::fabs(1.0 / p + 1.0 / q - 1.0) > 1e-12) {
        throw ConfigError("check_hoelder: need p, q > 1 with 1/p + 1/q = 1");
    }
    if (backend.kind() == LfiBackend::Kind::Operational) {
        throw CapabilityError(
            "check_hoelder: pointwise absolute powers need the quadrature backend");
    }
    std::vector<double> kinks = f.kink_points(a, b);
    for (double k : g.kink_points(a, b)) kinks.push_back(k);

    auto integrate = [&](std::function<double(double)> fn, const char* label) {
        return lfi(FunctionHandle::from_callable(std::move(fn), label, alpha, f.s(), kinks),
                   a, b, alpha, backend);
    };
    const double lhs =
        integrate([f, g](double t) { return std::fabs(f.eval(t) * g.eval(t)); }, "|f*g|");
    const double fp =
        integrate([f, p](double t) { return std::pow(std::fabs(f.eval(t)), p); }, "|f|^p");
    const double gq =
        integrate([g, q](double t) { return std::pow(std::fabs(g.eval(t)), q); }, "|g|^q");
    return std::pow(fp, 1.0 / p) * std::pow(gq, 1.0 / q) - lhs;
}

ConventionGap moment_convention_gap(double a, double b, double k, double alpha) {
    require_interval(a, b);
    require_alpha(alpha);
    const double kv = k * alpha;
    const double mk = moment({kv, alpha});
    ConventionGap gap{};
    gap.zero_anchored = mk * (std::pow(b, kv + alpha) - std::pow(a, kv + alpha));
    gap.interval_anchored = mk * std::pow(b - a, kv + alpha);
    gap.gap = std::fabs(gap.zero_anchored - gap.interval_anchored);
    return gap;
}

} // namespace lfract
