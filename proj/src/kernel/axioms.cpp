#include "mmheat/kernel.hpp"
#include "mmheat/numeric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace mmheat {

namespace {

constexpr double kSlackTol = 1e-12;

// Below this both sides are subnormal or nearly so and carry no relative
// precision; such samples count as agreeing.
constexpr double kResolvable = 1e-290;
constexpr double kTailFloor = 1e-6;

double rel_gap(double a, double b) {
    const double d = std::max(a, b);
    return d > kResolvable ? (a - b) / d : 0.0;
}

}  // namespace

TwoSidedReport verify_two_sided(const HeatKernel& kernel, const Profile& phi1, const Profile& phi2,
                                const MetricMeasureGrid& space, const std::vector<double>& t_samples,
                                const std::vector<std::pair<int, int>>& pair_samples) {
    if (t_samples.empty() || pair_samples.empty()) throw std::invalid_argument("verify_two_sided: empty samples");
    TwoSidedReport rep;
    rep.lower_margin = std::numeric_limits<double>::infinity();
    rep.upper_margin = std::numeric_limits<double>::infinity();
    rep.worst_margin = std::numeric_limits<double>::infinity();
    const double a_over_b = kernel.alpha() / kernel.beta();
    for (double t : t_samples) {
        if (!(t > 0.0)) throw std::invalid_argument("verify_two_sided: t must be positive");
        const double tscale = std::pow(t, 1.0 / kernel.beta());
        for (auto [x, y] : pair_samples) {
            const double d = space.dist(x, y);
            const double s = d / tscale;
            const double v = std::pow(t, a_over_b) * kernel.eval(t, d);
            const double lo = rel_gap(v, phi1(s));
            const double up = rel_gap(phi2(s), v);
            rep.lower_margin = std::min(rep.lower_margin, lo);
            rep.upper_margin = std::min(rep.upper_margin, up);
            if (std::min(lo, up) < rep.worst_margin) {
                rep.worst_margin = std::min(lo, up);
                rep.worst_s = s;
            }
            ++rep.samples;
        }
    }
    rep.lower_ok = rep.lower_margin >= -kSlackTol;
    rep.upper_ok = rep.upper_margin >= -kSlackTol;
    rep.ok = rep.lower_ok && rep.upper_ok;
    return rep;
}

KernelHolderFit estimate_holder_kernel(const HeatKernel& kernel, const MetricMeasureGrid& space,
                                       const std::vector<double>& t_samples,
                                       const std::vector<std::pair<int, int>>& pair_samples,
                                       const HolderFitOptions& options) {
    if (t_samples.empty() || pair_samples.empty())
        throw std::invalid_argument("estimate_holder_kernel: empty samples");
    struct Sample {
        double t, d, diff;
        bool in_regime;
    };
    std::vector<Sample> samples;
    const int n = space.size();
    for (double t : t_samples) {
        if (!(t > 0.0)) throw std::invalid_argument("estimate_holder_kernel: t must be positive");
        const double peak = kernel.eval(t, 0.0);
        const double regime = options.regime_fraction * std::pow(t, 1.0 / kernel.beta());
        for (auto [x1, x2] : pair_samples) {
            if (x1 == x2) throw std::invalid_argument("estimate_holder_kernel: pairs must be distinct points");
            const double d = space.dist(x1, x2);
            double diff = 0.0;
            for (int y = 0; y < n; ++y)
                diff = std::max(diff, std::abs(kernel.eval(t, space.dist(x1, y)) - kernel.eval(t, space.dist(x2, y))));
            if (diff <= options.zero_level * peak) diff = 0.0;
            samples.push_back({t, d, diff, d <= regime});
        }
    }

    std::vector<const Sample*> fit;
    for (const auto& s : samples)
        if (s.in_regime && s.diff > 0.0) fit.push_back(&s);

    KernelHolderFit out;
    out.samples = samples.size();
    out.fit_samples = fit.size();
    const bool all_zero = std::all_of(samples.begin(), samples.end(), [](const Sample& s) { return s.diff == 0.0; });
    if (all_zero) {
        // Spatially constant kernel: the bound holds with L = 0.
        out.nu = 1.0;
        out.sigma = 1.0;
        out.nu_raw = out.nu;
        out.sigma_raw = out.sigma;
        return out;
    }
    if (fit.size() < 3) throw std::invalid_argument("estimate_holder_kernel: fewer than 3 samples in the scaling regime");
    const auto [tmin, tmax] = std::minmax_element(fit.begin(), fit.end(), [](auto a, auto b) { return a->t < b->t; });
    const auto [dmin, dmax] = std::minmax_element(fit.begin(), fit.end(), [](auto a, auto b) { return a->d < b->d; });
    if ((*tmin)->t == (*tmax)->t || (*dmin)->d == (*dmax)->d)
        throw std::invalid_argument("estimate_holder_kernel: degenerate sample set (single t or single distance)");

    Eigen::MatrixXd A(fit.size(), 3);
    Eigen::VectorXd b(fit.size());
    for (std::size_t i = 0; i < fit.size(); ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = -std::log(fit[i]->t);
        A(i, 2) = std::log(fit[i]->d);
        b[i] = std::log(fit[i]->diff);
    }
    const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(b);
    out.nu_raw = coef[1];
    out.sigma_raw = coef[2];
    out.nu = std::max(1.0, out.nu_raw);
    out.sigma = std::clamp(out.sigma_raw, 1e-3, 1.0);
    out.projected = out.nu != out.nu_raw || out.sigma != out.sigma_raw;
    double L = out.projected ? 0.0 : std::exp(coef[0]);
    for (const auto& s : samples) {
        if (s.diff == 0.0) continue;
        L = std::max(L, s.diff * std::pow(s.t, out.nu) / std::pow(s.d, out.sigma));
    }
    out.L = L;
    return out;
}

std::vector<std::pair<int, int>> holder_pairs(const MetricMeasureGrid& space, std::size_t count, double max_distance) {
    const int x0 = space.x0();
    std::map<double, int> by_distance;
    for (int j = 0; j < space.size(); ++j) {
        const double d = space.dist(x0, j);
        if (d > 0.0 && d <= max_distance * (1.0 + 1e-12)) by_distance.emplace(d, j);
    }
    if (by_distance.empty()) throw std::invalid_argument("holder_pairs: no points within max_distance");
    const double dlo = by_distance.begin()->first;
    const double dhi = by_distance.rbegin()->first;
    std::vector<std::pair<int, int>> out;
    int last = -1;
    for (double target : logspace(dlo, std::max(dhi, dlo), count)) {
        auto it = by_distance.lower_bound(target);
        if (it == by_distance.end()) it = std::prev(it);
        if (it != by_distance.begin()) {
            auto prev = std::prev(it);
            if (target - prev->first < it->first - target) it = prev;
        }
        if (it->second != last) out.emplace_back(x0, it->second);
        last = it->second;
    }
    return out;
}

KernelAxiomReport verify_kernel_axioms(const HeatKernel& kernel, const MetricMeasureGrid& space,
                                       const std::vector<double>& t_samples, const std::vector<int>& x_samples,
                                       const AxiomOptions& options) {
    if (t_samples.empty() || x_samples.empty()) throw std::invalid_argument("verify_kernel_axioms: empty samples");
    const int n = space.size();
    for (int x : x_samples)
        if (x < 0 || x >= n) throw std::out_of_range("verify_kernel_axioms: point index out of range");
    for (double t : t_samples)
        if (!(t > 0.0)) throw std::invalid_argument("verify_kernel_axioms: t must be positive");

    KernelAxiomReport rep;
    rep.min_mass = std::numeric_limits<double>::infinity();
    rep.conservative_checked = kernel.conservative_claim();
    const double trunc = space.truncation_radius();
    const double shell = 0.05 * trunc;

    for (double t : t_samples) {
        for (int x : x_samples) {
            double mass = 0.0, edge = 0.0;
            for (int j = 0; j < n; ++j) {
                const double kxy = kernel.eval(t, space.dist(x, j));
                const double kyx = kernel.eval(t, space.dist(j, x));
                rep.symmetry_residual = std::max(rep.symmetry_residual, std::abs(kxy - kyx));
                const double m = kxy * space.weight(j);
                mass += m;
                if (space.boundary_distance(j) <= shell) edge += m;
            }
            rep.markov_mass = std::max(rep.markov_mass, mass);
            rep.min_mass = std::min(rep.min_mass, mass);
            rep.boundary_mass = std::max(rep.boundary_mass, edge);
            if (space.boundary_distance(x) >= 0.5 * trunc) {
                rep.conservative_deficit = std::max(rep.conservative_deficit, std::abs(1.0 - mass));
                ++rep.interior_samples;
            }
        }
    }
    rep.boundary_warning = rep.boundary_mass > options.boundary_tolerance;

    // Chapman-Kolmogorov over ordered pairs s <= t of the time samples.
    for (std::size_t a = 0; a < t_samples.size(); ++a) {
        for (std::size_t b = a; b < t_samples.size(); ++b) {
            const double s = t_samples[a], t = t_samples[b];
            const double peak = kernel.eval(s + t, 0.0);
            for (int x : x_samples) {
                Eigen::VectorXd ks(n);
                for (int y = 0; y < n; ++y) ks[y] = kernel.eval(s, space.dist(x, y)) * space.weight(y);
                for (int z : x_samples) {
                    double conv = 0.0;
                    for (int y = 0; y < n; ++y) conv += ks[y] * kernel.eval(t, space.dist(y, z));
                    // Relative error, floored at a fraction of the peak where the
                    // exact value has underflowed into the far tail.
                    const double exact = kernel.eval(s + t, space.dist(x, z));
                    const double scale = std::max(exact, kTailFloor * peak);
                    rep.semigroup_residual = std::max(rep.semigroup_residual, std::abs(conv - exact) / scale);
                }
            }
        }
    }

    if (options.profiles || options.fit_holder) {
        std::vector<std::pair<int, int>> pairs;
        for (int x : x_samples)
            for (int y = 0; y < n; ++y) pairs.emplace_back(x, y);
        if (options.profiles)
            rep.two_sided = verify_two_sided(kernel, options.profiles->first, options.profiles->second, space,
                                             t_samples, pairs);
        if (options.fit_holder) {
            const auto hp = holder_pairs(space, 128, std::max(space.min_spacing(), 0.25 * trunc));
            rep.holder_estimates = estimate_holder_kernel(kernel, space, logspace(1e-2, 10.0, 32), hp);
        }
    }
    return rep;
}

}  // namespace mmheat
