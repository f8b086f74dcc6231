#include "mmheat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmheat {

EnvelopeReport envelope_check(const Trajectory& u, double epsilon, double alpha, double beta, int x0,
                              const MetricMeasureGrid& space) {
    if (!(alpha > beta)) throw std::invalid_argument("envelope_check: requires alpha > beta");
    if (!(epsilon > 0.0)) throw std::invalid_argument("envelope_check: epsilon must be positive");
    if (x0 < 0 || x0 >= space.size()) throw std::invalid_argument("envelope_check: x0 out of range");
    if (u.values.empty()) throw std::invalid_argument("envelope_check: empty trajectory");

    GridFunction env(space.size());
    for (int i = 0; i < space.size(); ++i) env[i] = epsilon / (1.0 + std::pow(space.dist(i, x0), alpha - beta));

    EnvelopeReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < u.values.size(); ++k) {
        const auto& v = u.values[k];
        if (v.size() != space.size()) throw std::invalid_argument("envelope_check: trajectory has the wrong length");
        for (int i = 0; i < space.size(); ++i) {
            if (v[i] < 0.0 && !rep.negative_value) {
                rep.negative_value = true;
                rep.worst_node = k;
                rep.worst_point = i;
            }
            const double m = env[i] - v[i];
            if (m < rep.worst_margin) {
                rep.worst_margin = m;
                if (!rep.negative_value) {
                    rep.worst_node = k;
                    rep.worst_point = i;
                }
            }
        }
    }
    rep.pass = !rep.negative_value && rep.worst_margin >= 0.0;
    return rep;
}

ContractionReport contraction_feasibility(double C1_fix, double C3_lip, double p) {
    if (!(C1_fix > 0.0) || !(C3_lip > 0.0) || !std::isfinite(C1_fix) || !std::isfinite(C3_lip))
        throw std::invalid_argument("contraction_feasibility: constants must be positive and finite");
    if (!(p > 1.0)) throw std::invalid_argument("contraction_feasibility: p must exceed 1");
    // C3 p eps^(p-1) < 1 and C1 eps^p < eps, then a 0.9 safety factor.
    const double e_lip = std::pow(1.0 / (C3_lip * p), 1.0 / (p - 1.0));
    const double e_fix = std::pow(1.0 / C1_fix, 1.0 / (p - 1.0));
    ContractionReport rep;
    rep.epsilon_star = 0.9 * std::min(e_lip, e_fix);
    rep.delta_max = rep.epsilon_star / C1_fix - std::pow(rep.epsilon_star, p);
    rep.feasible = rep.delta_max > 0.0;
    return rep;
}

SmallDataConstants measure_small_data_constants(const HeatSemigroup& semigroup, const TimeGrid& t_grid, double p,
                                                double lambda) {
    const auto& kernel = semigroup.kernel();
    const auto& space = semigroup.space();
    const double alpha = kernel.alpha();
    const double beta = kernel.beta();
    if (!(alpha > beta)) throw std::invalid_argument("small data: requires alpha > beta");
    if (!(lambda > alpha)) throw std::invalid_argument("small data: lambda must exceed alpha");
    if (!(p > 1.0)) throw std::invalid_argument("small data: p must exceed 1");
    if (!t_grid.is_uniform() || t_grid.size() < 2) throw std::invalid_argument("small data: needs a uniform time grid");

    const int n = space.size();
    const int x0 = space.x0();
    GridFunction weight(n);
    Eigen::MatrixXd H(n, 3);
    for (int i = 0; i < n; ++i) {
        const double d = space.dist(i, x0);
        weight[i] = 1.0 + std::pow(d, alpha - beta);
        const double e = 1.0 / weight[i];
        H(i, 0) = 1.0 / (1.0 + std::pow(d, lambda));
        H(i, 1) = std::pow(e, p);
        H(i, 2) = std::pow(e, p - 1.0);
    }

    // Discrete scheme: on a uniform grid the trapezoid Duhamel sum of a
    // time-independent input is the cumulative trapezoid of K_tau applied to it.
    SmallDataConstants c;
    Eigen::MatrixXd prev = H;
    Eigen::MatrixXd cumulative = Eigen::MatrixXd::Zero(n, 3);
    c.A = (weight.array() * H.col(0).array()).maxCoeff();
    const double dt = t_grid.step();
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        Eigen::MatrixXd cur = semigroup.apply(t_grid[k], H);
        cumulative += 0.5 * dt * (prev + cur);
        c.A = std::max(c.A, (weight.array() * cur.col(0).array()).maxCoeff());
        c.B = std::max(c.B, (weight.array() * cumulative.col(0).array()).maxCoeff());
        c.D = std::max(c.D, (weight.array() * cumulative.col(1).array()).maxCoeff());
        c.C3 = std::max(c.C3, cumulative.col(2).maxCoeff());
        prev = std::move(cur);
    }

    // Time-integrated kernel G(r) = green(1) r^(beta-alpha), all t > 0.
    const double g1 = kernel.green(1.0);
    for (int x = 0; x < n; ++x) {
        c.B_green = std::max(c.B_green, weight[x] * g1 * singular_sum(space, x, alpha - beta, H.col(0)));
        c.D_green = std::max(c.D_green, weight[x] * g1 * singular_sum(space, x, alpha - beta, H.col(1)));
        c.C3_green = std::max(c.C3_green, g1 * singular_sum(space, x, alpha - beta, H.col(2)));
    }
    c.B = std::max(c.B, c.B_green);
    c.D = std::max(c.D, c.D_green);
    c.C3 = std::max(c.C3, c.C3_green);
    c.C1 = std::max(c.A + c.B, c.D);
    return c;
}

}  // namespace mmheat
