#include "mmheat/analysis.hpp"
#include "mmheat/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmheat {

namespace {

// Volume of the unit ball in dimension alpha (Euclidean formula, extended to
// non-integer alpha).
double unit_ball_volume(double alpha) {
    return std::pow(std::numbers::pi, 0.5 * alpha) / std::tgamma(0.5 * alpha + 1.0);
}

// Number of log-spaced radial shells used to fit the tail exponent.
constexpr int kShells = 12;
// Tail exponents above this are reported as divergent.
constexpr double kDivergenceLevel = -0.05;

}  // namespace

double singular_sum(const MetricMeasureGrid& space, int x, double lambda1, const GridFunction& h) {
    const double alpha = space.alpha_hint();
    if (!(lambda1 > 0.0 && lambda1 < alpha)) throw std::invalid_argument("singular_sum: lambda1 must lie in (0, alpha)");
    if (h.size() != space.size()) throw std::invalid_argument("singular_sum: h has the wrong length");
    double s = 0.0;
    for (int y = 0; y < space.size(); ++y) {
        if (y == x) continue;
        s += space.weight(y) * std::pow(space.dist(x, y), -lambda1) * h[y];
    }
    // Cell at y = x: integral of r^-lambda1 over a ball of the same measure.
    const double w = space.weight(x);
    const double rho = std::pow(w / unit_ball_volume(alpha), 1.0 / alpha);
    s += w * std::pow(rho, -lambda1) * alpha / (alpha - lambda1) * h[x];
    return s;
}

WeightedIntegralReport check_weighted_integrals(const MetricMeasureGrid& space, double lambda1, double lambda2,
                                                int x0, const std::vector<int>& x_samples) {
    const double alpha = space.alpha_hint();
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw std::invalid_argument("check_weighted_integrals: lambda1, lambda2 must be positive");
    if (!(lambda1 < alpha)) throw std::invalid_argument("check_weighted_integrals: lambda1 >= alpha diverges locally");
    if (x0 < 0 || x0 >= space.size()) throw std::invalid_argument("check_weighted_integrals: x0 out of range");
    if (x_samples.empty()) throw std::invalid_argument("check_weighted_integrals: no sample points");

    GridFunction h(space.size());
    for (int y = 0; y < space.size(); ++y) h[y] = 1.0 / (1.0 + std::pow(space.dist(y, x0), lambda2));

    WeightedIntegralReport rep;
    rep.x_samples = x_samples;
    rep.values.resize(x_samples.size());
    const bool normalized = lambda2 > alpha;
    double sup_norm = 0.0;
    for (std::size_t k = 0; k < x_samples.size(); ++k) {
        const int x = x_samples[k];
        if (x < 0 || x >= space.size()) throw std::invalid_argument("check_weighted_integrals: sample out of range");
        const double v = singular_sum(space, x, lambda1, h);
        rep.values[k] = v;
        rep.sup_I = std::max(rep.sup_I, v);
        if (normalized) sup_norm = std::max(sup_norm, v * (1.0 + std::pow(space.dist(x, x0), lambda1)));
    }
    if (normalized) rep.sup_normalized = sup_norm;

    // Radial density of the x = x0 integrand over the outer decade of the
    // grid; its log slope plus one estimates alpha - lambda1 - lambda2.
    const double R = space.truncation_radius();
    const auto edges = logspace(0.1 * R, R, kShells + 1);
    std::vector<double> mass(kShells, 0.0);
    for (int y = 0; y < space.size(); ++y) {
        const double r = space.dist(y, x0);
        if (r < edges.front() || r >= edges.back()) continue;
        const auto it = std::upper_bound(edges.begin(), edges.end(), r);
        const auto k = static_cast<std::size_t>(std::distance(edges.begin(), it) - 1);
        mass[k] += space.weight(y) * std::pow(r, -lambda1) * h[y];
    }
    std::vector<double> lx, ly;
    for (int k = 0; k < kShells; ++k) {
        if (!(mass[k] > 0.0)) continue;
        lx.push_back(0.5 * (std::log(edges[k]) + std::log(edges[k + 1])));
        ly.push_back(std::log(mass[k] / (edges[k + 1] - edges[k])));
    }
    if (lx.size() < 3) throw std::invalid_argument("check_weighted_integrals: grid too coarse for the tail fit");
    rep.tail_exponent = fit_line(lx, ly).slope + 1.0;
    rep.divergent = rep.tail_exponent > kDivergenceLevel;
    return rep;
}

MomentReport check_moment_bound(const MetricMeasureGrid& space, const Profile& profile, double alpha, double beta,
                                double lambda, const std::vector<double>& t_samples, int x) {
    if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("check_moment_bound: lambda must lie in (0, 1]");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("check_moment_bound: alpha, beta must be positive");
    if (!std::isfinite(profile.moment(alpha + 1.0)))
        throw std::invalid_argument("check_moment_bound: profile fails the moment integrability condition");
    if (t_samples.empty()) throw std::invalid_argument("check_moment_bound: no time samples");
    if (x < 0) x = space.x0();
    if (x >= space.size()) throw std::invalid_argument("check_moment_bound: x out of range");

    MomentReport rep;
    rep.t_samples = t_samples;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (double t : t_samples) {
        if (!(t > 0.0)) throw std::invalid_argument("check_moment_bound: times must be positive");
        const double scale = std::pow(t, 1.0 / beta);
        double J = 0.0;
        for (int y = 0; y < space.size(); ++y) {
            const double d = space.dist(x, y);
            if (d == 0.0) continue;
            J += space.weight(y) * std::pow(d, lambda) * profile(d / scale);
        }
        const double ratio = J / std::pow(t, (alpha + lambda) / beta);
        rep.ratios.push_back(ratio);
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
    rep.spread = rep.min_ratio > 0.0 ? rep.max_ratio / rep.min_ratio : std::numeric_limits<double>::infinity();
    rep.bounded = std::isfinite(rep.max_ratio);
    return rep;
}

}  // namespace mmheat
