#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mmheat {

std::vector<double> linspace(double a, double b, std::size_t n);
// n points geometrically spaced from a to b inclusive; a, b > 0.
std::vector<double> logspace(double a, double b, std::size_t n);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t n = 0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Relative comparison used wherever exponents are compared against thresholds.
bool nearly_equal(double a, double b, double rel_tol);

}  // namespace mmheat
