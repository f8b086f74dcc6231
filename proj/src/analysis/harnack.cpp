#include "mmheat/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace mmheat {

HarnackConstants harnack_constants(double a1, double a2, double alpha, double beta) {
    if (!(a1 > 0.0 && a1 <= 1.0)) throw std::invalid_argument("harnack_constants: a1 must lie in (0, 1]");
    // Below this the window [Bt, t] collapses and A2 degenerates to 0.
    if (!(a2 > 1.0 + 1e-6)) throw std::invalid_argument("harnack_constants: a2 must exceed 1");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("harnack_constants: alpha, beta must be positive");
    HarnackConstants hc;
    hc.a1 = a1;
    hc.a2 = a2;
    hc.alpha = alpha;
    hc.beta = beta;
    hc.A1 = a1 * std::pow(a2, -alpha);
    hc.B = std::pow(a2, -beta);
    hc.A2 = a1 * std::pow(a2, -2.0 * alpha) * (1.0 - hc.B);
    hc.B1 = hc.B * hc.B;
    hc.A = std::min(hc.A1 * hc.A1, hc.A2);
    return hc;
}

HarnackReport verify_harnack(const HeatSemigroup& semigroup, const Eigen::MatrixXd& g, double t,
                             const HarnackConstants& hc, const HarnackOptions& options) {
    if (!(t > 0.0)) throw std::invalid_argument("verify_harnack: t must be positive");
    if (g.rows() != semigroup.size()) throw std::invalid_argument("verify_harnack: g has the wrong length");
    if (!g.allFinite() || (g.array() < 0.0).any()) throw std::invalid_argument("verify_harnack: g must be nonnegative");
    if (options.steps_before < 1 || options.steps_after < 1)
        throw std::invalid_argument("verify_harnack: step counts must be positive");
    if (!(hc.B > 0.0 && hc.B < 1.0)) throw std::invalid_argument("verify_harnack: invalid constants");

    const Eigen::MatrixXd kt = semigroup.apply(t, g);
    const Eigen::MatrixXd kbt = semigroup.apply(hc.B * t, g);
    const Eigen::MatrixXd kb1t = semigroup.apply(hc.B1 * t, g);

    // Trapezoid with Bt as a node: [0, Bt] and [Bt, t] are integrated separately.
    Eigen::MatrixXd integral = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    auto accumulate = [&](double lo, double hi, int steps) {
        const double h = (hi - lo) / steps;
        for (int k = 0; k <= steps; ++k) {
            const double w = (k == 0 || k == steps) ? 0.5 * h : h;
            const double tau = lo + k * h;
            if (tau == 0.0)
                integral += w * g;
            else
                integral += w * semigroup.apply(tau, g);
        }
    };
    accumulate(0.0, hc.B * t, options.steps_before);
    accumulate(hc.B * t, t, options.steps_after);

    HarnackReport rep;
    rep.tol = options.tol;
    if (g.size() == 0) {
        rep.pass1 = rep.pass2 = rep.pass3 = rep.pass = true;
        return rep;
    }
    rep.margin1 = (kt - hc.A1 * kbt).minCoeff();
    rep.margin2 = (integral - hc.A2 * t * kb1t).minCoeff();
    rep.margin3 = (kt + integral - hc.A * (kb1t + t * kb1t)).minCoeff();
    rep.pass1 = rep.margin1 >= -options.tol;
    rep.pass2 = rep.margin2 >= -options.tol;
    rep.pass3 = rep.margin3 >= -options.tol;
    rep.pass = rep.pass1 && rep.pass2 && rep.pass3;
    return rep;
}

HarnackReport verify_harnack(const HeatKernel& kernel, const MetricMeasureGrid& space, const GridFunction& g,
                             double t, const HarnackConstants& hc, const HarnackOptions& options) {
    HeatSemigroup sg(kernel, space, 0);
    return verify_harnack(sg, Eigen::MatrixXd(g), t, hc, options);
}

}  // namespace mmheat
