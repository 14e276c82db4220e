#pragma once

#include <cstdint>
#include <string>

#include "lfract/function_handle.hpp"

namespace lfract {

struct Interval {
    double a = 0.0;
    double b = 1.0;
};

// Sampling plan for the convexity refuters: an endpoint grid for (u, v), a
// grid of mixing parameters, plus random triples.  The certifiers are
// falsifiers, not proofs: 'certified' means no violation above tolerance was
// found on the sample.
struct CertGrid {
    int endpoint_samples = 64;
    int lambda_samples = 33;
    int random_triples = 256;
    std::uint64_t seed = 0x2545F4914F6CDD1DULL;
};

struct CertOptions {
    bool require_nonnegative = true; // classical second-sense hypothesis
    double tolerance = 1e-10;
};

enum class ConvexSense {
    FirstSense,  // lambda1^s + lambda2^s = 1
    SecondSense, // lambda1 + lambda2 = 1
};

struct CertReport {
    bool certified = false;
    double max_violation = 0.0;
    double worst_u = 0.0;
    double worst_v = 0.0;
    double worst_lambda = 0.0;
    bool nonneg_ok = true;
    double min_value = 0.0;
    long evaluations = 0;
    double tolerance = 0.0;
    std::string note;
};

CertReport certify_s_convex(const FunctionHandle& f, double alpha, double s, Interval domain,
                            ConvexSense sense, const CertGrid& grid = {},
                            const CertOptions& opt = {});

inline CertReport certify_gks1(const FunctionHandle& f, double alpha, double s,
                               Interval domain, const CertGrid& grid = {},
                               const CertOptions& opt = {}) {
    return certify_s_convex(f, alpha, s, domain, ConvexSense::FirstSense, grid, opt);
}

inline CertReport certify_gks2(const FunctionHandle& f, double alpha, double s,
                               Interval domain, const CertGrid& grid = {},
                               const CertOptions& opt = {}) {
    return certify_s_convex(f, alpha, s, domain, ConvexSense::SecondSense, grid, opt);
}

// Empirical Hoelder constant: sup over sampled pairs of
// |f(x) - f(y)| / |x - y|^alpha.  Finite values signal membership in the
// alpha-Hoelder class on the interval.
double estimate_holder_constant(const FunctionHandle& f, double alpha, Interval domain,
                                int pair_count, std::uint64_t seed = 0x9E3779B97F4A7C15ULL);

} // namespace lfract
