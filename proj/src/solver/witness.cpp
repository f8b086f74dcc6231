#include "mmheat/analysis.hpp"
#include "mmheat/numeric.hpp"
#include "mmheat/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace mmheat {

WitnessReport nonexistence_witness(const ProblemSpec& problem, const HarnackConstants& harnack, double t_max,
                                   int t_count, const WitnessOptions& options) {
    validate_problem(problem);
    if (t_count < 3) throw std::invalid_argument("nonexistence_witness: t_count must be at least 3");
    if (!(t_max > 0.0)) throw std::invalid_argument("nonexistence_witness: t_max must be positive");
    if (!(options.t_min_ratio > 0.0 && options.t_min_ratio < 1.0))
        throw std::invalid_argument("nonexistence_witness: t_min_ratio must lie in (0, 1)");
    if (!(harnack.B1 > 0.0)) throw std::invalid_argument("nonexistence_witness: invalid Harnack constants");

    const double p = problem.p;
    const double e_phi = 1.0 / (p - 1.0);
    const double e_f = p / (p - 1.0);
    const bool phi_zero = !(problem.phi.array() > 0.0).any();
    const bool f_zero = !(problem.f.array() > 0.0).any();
    HeatSemigroup sg(problem.kernel, *problem.space, 0);

    WitnessReport rep;
    rep.times = logspace(options.t_min_ratio * t_max, t_max, static_cast<std::size_t>(t_count));
    std::vector<double> lx, ly;
    for (double t : rep.times) {
        GridFunction w = GridFunction::Zero(problem.space->size());
        if (!phi_zero || !f_zero) {
            const auto m = sg.matrix(harnack.B1 * t);
            if (!phi_zero) w += std::pow(t, e_phi) * (*m * problem.phi);
            if (!f_zero) w += std::pow(t, e_f) * (*m * problem.f);
        }
        const double sup = w.maxCoeff();
        rep.sup_values.push_back(sup);
        rep.max_value = std::max(rep.max_value, sup);
        if (sup > 0.0 && std::isfinite(sup)) {
            lx.push_back(std::log(t));
            ly.push_back(std::log(sup));
        }
    }
    if (lx.size() < 3) {
        rep.zero_data = true;
        rep.growth_exponent = std::nan("");
        return rep;
    }
    const auto fit = fit_line(lx, ly);
    rep.growth_exponent = fit.slope;
    rep.exponent_stderr = fit.slope_stderr;
    rep.witness = fit.slope > options.margin + 2.0 * fit.slope_stderr;
    return rep;
}

}  // namespace mmheat
