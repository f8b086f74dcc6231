#include "mmheat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mmheat {

namespace {

// Lazily evaluated ||K_t phi||_inf and ||K_t f||_inf.
class NormTable {
public:
    NormTable(const ProblemSpec& problem)
        : sg_(problem.kernel, *problem.space, 0),
          phi_(problem.phi),
          f_(problem.f),
          phi_zero_(!(problem.phi.array() > 0.0).any()),
          f_zero_(!(problem.f.array() > 0.0).any()) {}

    std::pair<double, double> at(double t) {
        auto it = cache_.find(t);
        if (it != cache_.end()) return it->second;
        std::pair<double, double> v{0.0, 0.0};
        if (t == 0.0) {
            v = {phi_.maxCoeff(), f_.maxCoeff()};
        } else {
            if (!phi_zero_ || !f_zero_) {
                const auto m = sg_.matrix(t);
                if (!phi_zero_) v.first = (*m * phi_).maxCoeff();
                if (!f_zero_) v.second = (*m * f_).maxCoeff();
            }
        }
        if (!std::isfinite(v.first) || !std::isfinite(v.second))
            throw std::invalid_argument("local_horizon: non-finite data norms");
        cache_.emplace(t, v);
        return v;
    }

private:
    HeatSemigroup sg_;
    const GridFunction& phi_;
    const GridFunction& f_;
    bool phi_zero_;
    bool f_zero_;
    std::map<double, std::pair<double, double>> cache_;
};

}  // namespace

HorizonReport local_horizon(const ProblemSpec& problem, double ode_step, double blowup_cap,
                            const HorizonOptions& options) {
    validate_problem(problem);
    if (!(ode_step > 0.0)) throw std::invalid_argument("local_horizon: ode_step must be positive");
    if (!(blowup_cap > 1.0)) throw std::invalid_argument("local_horizon: blowup_cap must exceed b(0) = 1");
    if (!(options.t_max > 0.0)) throw std::invalid_argument("local_horizon: t_max must be positive");
    const double p = problem.p;
    NormTable norms(problem);

    HorizonReport rep;
    double t = 0.0, a = 0.0, b = 1.0, h = ode_step;
    auto [np0, nf0] = norms.at(0.0);
    auto integrand = [p](double a_, double b_, double np) { return std::pow(a_ / b_ + np, p - 1.0); };
    rep.t_samples.push_back(t);
    rep.a_samples.push_back(a);
    rep.b_samples.push_back(b);
    rep.phi_norms.push_back(np0);
    rep.f_norms.push_back(nf0);
    double e_prev = integrand(a, b, np0);
    double integral = 0.0;

    while (t < options.t_max) {
        const double step = std::min(h, options.t_max - t);
        const auto [np_lo, nf_lo] = norms.at(t);
        const auto [np_hi, nf_hi] = norms.at(t + step);
        auto np = [&](double s) { return np_lo + (np_hi - np_lo) * s; };
        auto nf = [&](double s) { return nf_lo + (nf_hi - nf_lo) * s; };
        auto rhs = [&](double s, double av, double bv) {
            const double g = std::pow(av + bv * np(s), p - 1.0);
            return std::pair{nf(s) + av * g, bv * g};
        };
        const auto [ka1, kb1] = rhs(0.0, a, b);
        const auto [ka2, kb2] = rhs(0.5, a + 0.5 * step * ka1, b + 0.5 * step * kb1);
        const auto [ka3, kb3] = rhs(0.5, a + 0.5 * step * ka2, b + 0.5 * step * kb2);
        const auto [ka4, kb4] = rhs(1.0, a + step * ka3, b + step * kb3);
        const double a_new = a + step / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
        const double b_new = b + step / 6.0 * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
        if (!std::isfinite(a_new) || !std::isfinite(b_new) || b_new > 2.0 * b) {
            h = 0.5 * step;
            if (h < options.min_step) {
                // Step control can no longer advance: treat as blow-up here.
                rep.blew_up = true;
                rep.T0_estimate = t;
                break;
            }
            continue;
        }
        t += step;
        a = a_new;
        b = b_new;
        const double e = integrand(a, b, np_hi);
        integral += 0.5 * step * (e_prev + e);
        e_prev = e;
        rep.t_samples.push_back(t);
        rep.a_samples.push_back(a);
        rep.b_samples.push_back(b);
        rep.phi_norms.push_back(np_hi);
        rep.f_norms.push_back(nf_hi);
        if (b > blowup_cap) {
            rep.blew_up = true;
            rep.T0_estimate = t;
            break;
        }
    }
    rep.existence_condition_value = integral;
    rep.condition_met = integral <= 1.0 / (p - 1.0) + 1e-6;
    return rep;
}

}  // namespace mmheat
