#include "lfract/convexity.hpp"

#include <cmath>
#include <random>

#include "lfract/errors.hpp"

namespace lfract {

namespace {

void require_domain(Interval d) {
    if (!(d.a >= 0.0) || !(d.b > d.a)) {
        throw ConfigError("certifier domain must satisfy 0 <= a < b");
    }
}

struct Probe {
    double u, v, lambda1, lambda2;
};

// First-sense mixing weights from the constraint lambda1^s + lambda2^s = 1,
// parameterized by t in [0, 1].
Probe first_sense_probe(double u, double v, double t, double s) {
    return {u, v, std::pow(t, 1.0 / s), std::pow(1.0 - t, 1.0 / s)};
}

Probe second_sense_probe(double u, double v, double t) { return {u, v, t, 1.0 - t}; }

} // namespace

CertReport certify_s_convex(const FunctionHandle& f, double alpha, double s, Interval domain,
                            ConvexSense sense, const CertGrid& grid, const CertOptions& opt) {
    require_domain(domain);
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw ConfigError("certifier: alpha must lie in (0, 1]");
    }
    if (!(s > 0.0) || s > 1.0) {
        throw ConfigError("certifier: s must lie in (0, 1]");
    }
    if (grid.endpoint_samples < 2 || grid.lambda_samples < 2) {
        throw ConfigError("certifier grid is empty");
    }

    CertReport rep;
    rep.tolerance = opt.tolerance;

    const double p = alpha * s;
    const double width = domain.b - domain.a;

    // Nonnegativity scan along the endpoint grid.
    rep.min_value = f.eval(domain.a);
    for (int i = 0; i <= grid.endpoint_samples; ++i) {
        const double x = domain.a + width * static_cast<double>(i) / grid.endpoint_samples;
        rep.min_value = std::min(rep.min_value, f.eval(x));
        ++rep.evaluations;
    }
    rep.nonneg_ok = rep.min_value >= -opt.tolerance;
    if (opt.require_nonnegative && !rep.nonneg_ok) {
        rep.certified = false;
        rep.note = "rejected: f takes negative values on the sample (min " +
                   std::to_string(rep.min_value) + "); pass allow-negative to search anyway";
        return rep;
    }

    auto violation_at = [&](const Probe& pr) {
        const double x = pr.lambda1 * pr.u + pr.lambda2 * pr.v;
        const double lhs = f.eval(x);
        const double rhs =
            std::pow(pr.lambda1, p) * f.eval(pr.u) + std::pow(pr.lambda2, p) * f.eval(pr.v);
        rep.evaluations += 3;
        const double viol = lhs - rhs;
        if (viol > rep.max_violation) {
            rep.max_violation = viol;
            rep.worst_u = pr.u;
            rep.worst_v = pr.v;
            rep.worst_lambda = pr.lambda1;
        }
    };

    auto probe = [&](double u, double v, double t) {
        if (sense == ConvexSense::SecondSense) {
            violation_at(second_sense_probe(u, v, t));
        } else {
            violation_at(first_sense_probe(u, v, t, s));
        }
    };

    for (int i = 0; i <= grid.endpoint_samples; ++i) {
        const double u = domain.a + width * static_cast<double>(i) / grid.endpoint_samples;
        for (int jj = 0; jj <= grid.endpoint_samples; ++jj) {
            const double v =
                domain.a + width * static_cast<double>(jj) / grid.endpoint_samples;
            for (int k = 0; k < grid.lambda_samples; ++k) {
                const double t = static_cast<double>(k) / (grid.lambda_samples - 1);
                probe(u, v, t);
            }
        }
    }

    std::mt19937_64 rng(grid.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int r = 0; r < grid.random_triples; ++r) {
        const double u = domain.a + width * unit(rng);
        const double v = domain.a + width * unit(rng);
        probe(u, v, unit(rng));
    }

    rep.certified = rep.max_violation <= opt.tolerance;
    if (!rep.certified && rep.note.empty()) {
        rep.note = "violation found";
    }
    return rep;
}

double estimate_holder_constant(const FunctionHandle& f, double alpha, Interval domain,
                                int pair_count, std::uint64_t seed) {
    require_domain(domain);
    if (pair_count < 2) {
        throw ConfigError("estimate_holder_constant: need at least 2 pairs");
    }
    const double width = domain.b - domain.a;
    double best = 0.0;
    auto ratio = [&](double x, double y) {
        if (x == y) return 0.0;
        return std::fabs(f.eval(x) - f.eval(y)) / std::pow(std::fabs(x - y), alpha);
    };
    // structured pairs: grid points against the endpoints and against
    // adjacent grid points (adjacent pairs catch local roughness)
    const int n = std::max(8, pair_count / 4);
    for (int i = 0; i <= n; ++i) {
        const double x = domain.a + width * static_cast<double>(i) / n;
        best = std::max(best, ratio(x, domain.a));
        best = std::max(best, ratio(x, domain.b));
        if (i > 0) {
            const double prev = domain.a + width * static_cast<double>(i - 1) / n;
            best = std::max(best, ratio(x, prev));
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < pair_count; ++i) {
        const double x = domain.a + width * unit(rng);
        const double y = domain.a + width * unit(rng);
        best = std::max(best, ratio(x, y));
    }
    return best;
}

} // namespace lfract
