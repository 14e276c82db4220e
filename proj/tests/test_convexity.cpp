#include <doctest.h>

#include <cmath>

#include "lfract/convexity.hpp"
#include "lfract/errors.hpp"

using namespace lfract;

namespace {

// Brute-force refuter over a dense independent grid; used as the oracle for
// the certifier verdicts below.
double grid_violation_gks2(const FunctionHandle& f, double alpha, double s, int n) {
    const double p = alpha * s;
    double worst = -1e300;
    for (int iu = 0; iu <= n; ++iu) {
        for (int iv = 0; iv <= n; ++iv) {
            for (int il = 0; il <= n; ++il) {
                const double u = static_cast<double>(iu) / n;
                const double v = static_cast<double>(iv) / n;
                const double l1 = static_cast<double>(il) / n;
                const double l2 = 1.0 - l1;
                const double viol = f.eval(l1 * u + l2 * v) -
                                    std::pow(l1, p) * f.eval(u) - std::pow(l2, p) * f.eval(v);
                worst = std::max(worst, viol);
            }
        }
    }
    return worst;
}

} // namespace

TEST_CASE("power family is certified in both senses") {
    for (double alpha : {0.4, 0.8}) {
        for (double s : {0.3, 0.7}) {
            const FunctionHandle f = FunctionHandle::from_expression("x^(a*s)", alpha, s);
            // oracle: dense grid search finds no violation either
            CHECK(grid_violation_gks2(f, alpha, s, 40) <= 1e-12);
            const CertReport r2 = certify_gks2(f, alpha, s, Interval{0.0, 1.0});
            CHECK(r2.certified);
            CHECK(r2.max_violation <= 1e-12);
            const CertReport r1 = certify_gks1(f, alpha, s, Interval{0.0, 1.0});
            CHECK(r1.certified);
            CHECK(r1.max_violation <= 1e-12);
        }
    }
}

TEST_CASE("nonnegative constants are certified, negative ones refuted") {
    const FunctionHandle c = FunctionHandle::from_expression("2", 0.5, 0.5);
    CHECK(certify_gks2(c, 0.5, 0.5, Interval{0.0, 1.0}).certified);

    const FunctionHandle neg = FunctionHandle::from_expression("-1", 0.5, 0.5);
    // default policy: rejected on the nonnegativity precheck
    const CertReport gated = certify_gks2(neg, 0.5, 0.5, Interval{0.0, 1.0});
    CHECK_FALSE(gated.certified);
    CHECK_FALSE(gated.nonneg_ok);

    // with the check disabled, the inequality itself is refuted:
    // at u = v the gap is (l1^p + l2^p - 1) > 0 for p in (0,1)
    CertOptions opt;
    opt.require_nonnegative = false;
    const CertReport r2 = certify_gks2(neg, 0.5, 0.5, Interval{0.0, 1.0}, CertGrid{}, opt);
    CHECK_FALSE(r2.certified);
    CHECK(r2.max_violation > 0.0);
    const double p = 0.25; // alpha*s
    CHECK(r2.max_violation <=
          2.0 * std::pow(0.5, p) - 1.0 + 1e-12); // analytic maximum at l1 = l2 = 1/2
    const CertReport r1 = certify_gks1(neg, 0.5, 0.5, Interval{0.0, 1.0}, CertGrid{}, opt);
    CHECK_FALSE(r1.certified);
    CHECK(r1.max_violation > 0.0);
}

TEST_CASE("zero function is certified with zero violation") {
    const FunctionHandle z = FunctionHandle::from_expression("0", 0.5, 0.5);
    const CertReport r = certify_gks1(z, 0.5, 0.5, Interval{0.0, 1.0});
    CHECK(r.certified);
    CHECK(r.max_violation == 0.0);
}

TEST_CASE("certified combinations stay certified (closure)") {
    const double alpha = 0.6;
    const double s = 0.5;
    const FunctionHandle combo =
        FunctionHandle::from_expression("2*x^(a*s) + 3", alpha, s);
    CHECK(certify_gks2(combo, alpha, s, Interval{0.0, 1.0}).certified);
}

TEST_CASE("monotone in tolerance") {
    const FunctionHandle f = FunctionHandle::from_expression("x^(a*s)", 0.5, 0.5);
    CertOptions tight;
    tight.tolerance = 1e-13;
    CertOptions loose;
    loose.tolerance = 1e-6;
    const CertReport a = certify_gks2(f, 0.5, 0.5, Interval{0.0, 1.0}, CertGrid{}, tight);
    const CertReport b = certify_gks2(f, 0.5, 0.5, Interval{0.0, 1.0}, CertGrid{}, loose);
    CHECK(a.max_violation == b.max_violation);
    if (a.certified) CHECK(b.certified);
}

TEST_CASE("empty grids and bad parameters are configuration errors") {
    const FunctionHandle f = FunctionHandle::from_expression("x", 1.0, 1.0);
    CHECK_THROWS_AS(certify_gks2(f, 1.0, 1.0, Interval{0.0, 1.0}, CertGrid{1, 33, 0}),
                    ConfigError);
    CHECK_THROWS_AS(certify_gks2(f, 1.0, 1.0, Interval{1.0, 0.5}), ConfigError);
    CHECK_THROWS_AS(certify_gks2(f, 1.5, 1.0, Interval{0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(certify_gks2(f, 1.0, 0.0, Interval{0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(
        estimate_holder_constant(f, 1.0, Interval{0.0, 1.0}, 1), ConfigError);
}

TEST_CASE("Hoelder constant estimates") {
    // |x^a - y^a| <= |x - y|^a with constant exactly 1
    for (double alpha : {0.3, 0.5, 0.8}) {
        const FunctionHandle f = FunctionHandle::from_expression("x^a", alpha, 1.0);
        const double c = estimate_holder_constant(f, alpha, Interval{0.0, 1.0}, 4000);
        CHECK(c <= 1.0 + 1e-9);
        CHECK(c >= 0.95); // the supremum 1 is approached on the grid
    }
    // constants have zero increments
    const FunctionHandle c3 = FunctionHandle::from_expression("3", 0.5, 1.0);
    CHECK(estimate_holder_constant(c3, 0.5, Interval{0.0, 1.0}, 100) == 0.0);
    // Lipschitz functions lie in every weaker class on a bounded interval
    const FunctionHandle lin = FunctionHandle::from_expression("x", 0.5, 1.0);
    const double cl = estimate_holder_constant(lin, 0.5, Interval{0.0, 1.0}, 4000);
    CHECK(cl <= 1.0 + 1e-12);
}
