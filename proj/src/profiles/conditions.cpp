#include "mmheat/numeric.hpp"
#include "mmheat/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace mmheat {

namespace {

constexpr std::size_t kCandidates = 64;
constexpr double kScaleMax = 10.0;
constexpr double kFactorMin = 1e-6;
// Log-space tolerance absorbing rounding in equality cases.
constexpr double kLogTol = 1e-12;

// (lhs - rhs) in log space, relative to the magnitude of rhs.
double normalized_gap(double lhs, double rhs) { return (lhs - rhs) / std::max(1.0, std::abs(rhs)); }

// Is inf_s Phi_a(s)^power / Phi_b(scale s) > 0 for some finite scale > 1?
bool tail_feasible(const TailClass& a, double power, const TailClass& b) {
    using K = TailClass::Kind;
    if (a.kind == K::Power && b.kind == K::Power) return b.q >= power * a.q;
    if (a.kind == K::Power && b.kind == K::Gauss) return true;
    if (a.kind == K::Gauss && b.kind == K::Power) return false;
    return b.gamma >= a.gamma;
}

// min over the grid of power*log Phi_a(s) - log Phi_b(scale s)
double min_log_ratio(const Profile& a, const Profile& b, double power, double scale, const std::vector<double>& grid) {
    double m = std::numeric_limits<double>::infinity();
    for (double s : grid) m = std::min(m, power * a.log_value(s) - b.log_value(scale * s));
    return m;
}

double slack(const Profile& a, const Profile& b, double power, double factor, double scale,
             const std::vector<double>& grid) {
    double m = std::numeric_limits<double>::infinity();
    for (double s : grid) {
        m = std::min(m, normalized_gap(power * a.log_value(s), std::log(factor) + b.log_value(scale * s)));
    }
    return m;
}

// Grid search over scale in (1, 10] and factor in [1e-6 upper, upper], keeping
// the pair that maximises factor * scale^-alpha.
ScaleWitness search_scale_witness(const Profile& a, const Profile& b, double power, double upper, double alpha,
                                  const std::vector<double>& grid) {
    ScaleWitness w;
    const auto scales = logspace(std::pow(kScaleMax, 1.0 / kCandidates), kScaleMax, kCandidates);
    const auto factors = logspace(kFactorMin * upper, upper, kCandidates);
    double best = -std::numeric_limits<double>::infinity();
    for (double sc : scales) {
        const double m = min_log_ratio(a, b, power, sc, grid);
        double chosen = 0.0;
        for (double f : factors)
            if (std::log(f) <= m) chosen = f;
        if (chosen == 0.0) continue;
        const double score = std::log(chosen) - alpha * std::log(sc);
        if (score > best) {
            best = score;
            w.factor = chosen;
            w.scale = sc;
        }
    }
    w.holds = w.factor > 0.0;
    return w;
}

ScaleWitness scale_condition(const Profile& a, const Profile& b, double power, bool cap_at_one, double alpha) {
    const auto grid = verification_grid();
    ScaleWitness w;
    w.tail_feasible = tail_feasible(a.tail(), power, b.tail());

    // Closed-form witnesses for matched families.
    const auto* ga = std::get_if<GaussType>(&a.family());
    const auto* gb = std::get_if<GaussType>(&b.family());
    const auto* ca = std::get_if<CauchyType>(&a.family());
    const auto* cb = std::get_if<CauchyType>(&b.family());
    if (ga && gb && ga->gamma == gb->gamma) {
        const double need = std::pow(power * ga->c / gb->c, 1.0 / gb->gamma);
        w.scale = cap_at_one ? std::max(2.0, need) : need;
        w.factor = std::pow(ga->C, power) / gb->C;
        if (cap_at_one) w.factor = std::min(1.0, w.factor);
        w.from_algebra = true;
    } else if (ca && cb && cb->gamma >= power * ca->gamma) {
        w.scale = 2.0;
        w.factor = std::pow(ca->C, power) / cb->C;
        if (cap_at_one) w.factor = std::min(1.0, w.factor);
        w.from_algebra = true;
    }
    if (w.from_algebra) {
        w.min_slack = slack(a, b, power, w.factor, w.scale, grid);
        w.holds = w.tail_feasible && w.min_slack >= -kLogTol;
        if (w.holds) return w;
        w.from_algebra = false;
    }

    const double s0_ratio = std::exp(power * a.log_value(0.0) - b.log_value(0.0));
    const double upper = cap_at_one ? std::min(1.0, s0_ratio) : s0_ratio;
    ScaleWitness found = search_scale_witness(a, b, power, upper, alpha, grid);
    found.tail_feasible = w.tail_feasible;
    if (found.factor > 0.0) found.min_slack = slack(a, b, power, found.factor, found.scale, grid);
    // A grid witness without asymptotic support is not reported as holding.
    found.holds = found.holds && found.tail_feasible;
    return found;
}

double general4_slack(const Profile& phi2, double b1, double b2, double b3, const std::vector<double>& grid) {
    std::vector<double> l2(grid.size()), l3(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        l2[i] = phi2.log_value(b2 * grid[i]);
        l3[i] = phi2.log_value(b3 * grid[i]);
    }
    const double lb1 = std::log(b1);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j)
            m = std::min(m, normalized_gap(phi2.log_value(grid[i] + grid[j]), lb1 + l2[i] + l3[j]));
    return m;
}

General4Witness general4_condition(const Profile& phi2) {
    const auto grid = verification_grid();
    General4Witness w;
    const double phi0 = phi2(0.0);
    if (const auto* g = std::get_if<GaussType>(&phi2.family())) {
        const double b = g->gamma >= 1.0 ? std::pow(2.0, (g->gamma - 1.0) / g->gamma) : 1.0;
        w = {false, 1.0 / g->C, b, b, true, 0.0};
    } else if (const auto* c = std::get_if<CauchyType>(&phi2.family())) {
        w = {false, 1.0 / c->C, 1.0, 1.0, true, 0.0};
    } else {
        // Power tails admit b2 = b3 = 1; b1 is the measured infimum of the ratio.
        std::vector<double> l(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) l[i] = phi2.log_value(grid[i]);
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (std::size_t j = 0; j < grid.size(); ++j)
                m = std::min(m, phi2.log_value(grid[i] + grid[j]) - l[i] - l[j]);
        const double b1 = std::min(1.0 / phi0, std::exp(m)) * (1.0 - 1e-9);
        w = {false, b1, 1.0, 1.0, false, 0.0};
    }
    w.min_slack = general4_slack(phi2, w.b1, w.b2, w.b3, grid);
    w.holds = w.min_slack >= -kLogTol;
    return w;
}

IntegrabilityFlag integrability(const Profile& phi2, double k) {
    const double v = phi2.moment(k);
    return {std::isfinite(v), v};
}

}  // namespace

std::vector<double> verification_grid(std::size_t count) {
    auto g = logspace(1e-3, 1e3, count);
    g.insert(g.begin(), 0.0);
    return g;
}

ProfilePredicateReport check_profile_conditions(const Profile& phi1, const Profile& phi2, double p, double alpha) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("check_profile_conditions: p must exceed 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("check_profile_conditions: alpha must be positive");
    ProfilePredicateReport rep;
    rep.general1 = scale_condition(phi1, phi2, 1.0, true, alpha);
    rep.general4 = general4_condition(phi2);
    rep.general2 = scale_condition(phi1, phi2, p, false, alpha);
    rep.phi = integrability(phi2, alpha);
    rep.general5 = integrability(phi2, alpha + 1.0);
    return rep;
}

bool verify_scale_witness(const Profile& phi1, const Profile& phi2, double power, double factor, double scale) {
    if (!(factor > 0.0) || !(scale > 0.0)) return false;
    return slack(phi1, phi2, power, factor, scale, verification_grid()) >= -kLogTol;
}

bool verify_general4(const Profile& phi2, double b1, double b2, double b3) {
    if (!(b1 > 0.0) || !(b2 > 0.0) || !(b3 > 0.0)) return false;
    return general4_slack(phi2, b1, b2, b3, verification_grid()) >= -kLogTol;
}

General3Report check_general3(const Profile& phi2, const General4Witness& w, const MetricMeasureGrid& space,
                              double beta, const std::vector<double>& t_samples, std::size_t pairs,
                              std::uint64_t seed) {
    if (!(beta > 0.0)) throw std::invalid_argument("check_general3: beta must be positive");
    if (t_samples.empty() || pairs == 0) throw std::invalid_argument("check_general3: empty samples");
    General3Report rep;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, space.size() - 1);
    const int x0 = space.x0();
    for (double t : t_samples) {
        if (!(t > 0.0)) throw std::invalid_argument("check_general3: t must be positive");
        const double scale = std::pow(t, -1.0 / beta);
        for (std::size_t k = 0; k < pairs; ++k) {
            const int x = pick(rng), y = pick(rng);
            const double lhs = phi2.log_value(space.dist(x, y) * scale) - phi2.log_value(w.b2 * space.dist(x, x0) * scale);
            const double rhs = std::log(w.b1) + phi2.log_value(w.b3 * space.dist(y, x0) * scale);
            rep.worst_slack = std::min(rep.worst_slack, normalized_gap(lhs, rhs));
            ++rep.samples;
        }
    }
    rep.holds = rep.worst_slack >= -kLogTol;
    return rep;
}

}  // namespace mmheat
