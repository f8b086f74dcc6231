#include "mmheat/analysis.hpp"
#include "mmheat/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmheat {

double HolderParams::theta() const {
    if (!(theta1 > 0.0 && theta1 <= 1.0) || !(theta2 > 0.0 && theta2 <= 1.0))
        throw std::invalid_argument("holder: theta1, theta2 must lie in (0, 1]");
    if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("holder: sigma must lie in (0, 1]");
    if (!(nu > 0.0) || !(beta > 0.0) || !(L >= 0.0)) throw std::invalid_argument("holder: nu, beta must be positive");
    return theta1 * sigma / (theta1 + nu * beta);
}

HolderEstimate holder_estimate(const GridFunction& u, const MetricMeasureGrid& space, const HolderParams& params,
                               const HolderOptions& options) {
    if (u.size() != space.size()) throw std::invalid_argument("holder_estimate: u has the wrong length");
    if (!u.allFinite()) throw std::invalid_argument("holder_estimate: u must be finite");
    if (!(options.max_distance > 0.0) || options.bins < 2)
        throw std::invalid_argument("holder_estimate: invalid options");

    struct Pair {
        double d;
        double diff;
    };
    std::vector<Pair> pairs;
    for (int i = 0; i < space.size(); ++i)
        for (int j = i + 1; j < space.size(); ++j) {
            const double d = space.dist(i, j);
            if (d > 0.0 && d <= options.max_distance) pairs.push_back({d, std::abs(u[i] - u[j])});
        }
    if (pairs.size() < options.min_pairs)
        throw std::invalid_argument("holder_estimate: fewer point pairs with d <= max_distance than required");

    HolderEstimate est;
    est.pairs = pairs.size();
    est.theoretical_theta = params.theta();

    // Differences at round-off level count as zero.
    const double zero = 1e-13 * std::max(1.0, u.cwiseAbs().maxCoeff());
    double d_min = options.max_distance;
    for (const auto& pr : pairs) d_min = std::min(d_min, pr.d);

    // Modulus of continuity: per log-distance bin, the pair with the largest
    // difference.
    std::vector<Pair> best(options.bins, Pair{0.0, 0.0});
    if (d_min < options.max_distance) {
        const auto edges = logspace(d_min, options.max_distance, options.bins + 1);
        for (const auto& pr : pairs) {
            auto it = std::upper_bound(edges.begin(), edges.end(), pr.d);
            auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, std::distance(edges.begin(), it) - 1));
            k = std::min(k, options.bins - 1);
            if (pr.diff > best[k].diff) best[k] = pr;
        }
    } else {
        for (const auto& pr : pairs)
            if (pr.diff > best[0].diff) best[0] = pr;
    }
    std::vector<double> lx, ly;
    for (const auto& b : best)
        if (b.diff > zero) {
            lx.push_back(std::log(b.d));
            ly.push_back(std::log(b.diff));
        }

    if (lx.size() < 2) {
        est.theta_fit = 1.0;
        est.theta_hat = 1.0;
    } else {
        est.theta_fit = fit_line(lx, ly).slope;
        est.theta_hat = std::min(1.0, est.theta_fit);
    }
    for (const auto& pr : pairs) {
        if (pr.diff <= zero) continue;
        est.C_hat = std::max(est.C_hat, pr.diff / std::pow(pr.d, est.theta_hat));
    }
    est.pass = est.theta_hat >= est.theoretical_theta - options.fit_tolerance;
    return est;
}

}  // namespace mmheat
