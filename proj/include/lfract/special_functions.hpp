#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lfract::special {

// Gamma function for positive real arguments.
// Target accuracy: relative error <= 1e-13 on [0.1, 50].
double gamma(double x);

// log(Gamma(x)) for x > 0; exp(log_gamma(x)) agrees with gamma(x) to 1e-12.
double log_gamma(double x);

// Gamma(p)/Gamma(q), computed in the log domain.
double gamma_ratio(double p, double q);

// Euler Beta: Gamma(p)Gamma(q)/Gamma(p+q).
double beta(double p, double q);

// Reference table support: plain text, two columns (x, Gamma(x)),
// '#' starts a comment. Used by accuracy fixtures.
std::vector<std::pair<double, double>> load_reference_table(const std::string& path);
std::vector<std::pair<double, double>> parse_reference_table(const std::string& text);

} // namespace lfract::special
