#include "mmheat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mmheat {

void validate_problem(const ProblemSpec& problem) {
    if (!problem.space) throw std::invalid_argument("problem: space is missing");
    const auto n = problem.space->size();
    if (!(problem.p > 1.0) || !std::isfinite(problem.p)) throw std::invalid_argument("problem: p must exceed 1");
    if (problem.phi.size() != n || problem.f.size() != n)
        throw std::invalid_argument("problem: phi and f must have one value per grid point");
    if (!problem.phi.allFinite() || !problem.f.allFinite())
        throw std::invalid_argument("problem: phi and f must be bounded");
    if ((problem.phi.array() < 0.0).any() || (problem.f.array() < 0.0).any())
        throw std::invalid_argument("problem: phi and f must be nonnegative");
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged:
            return "Converged";
        case SolveStatus::BlownUp:
            return "BlownUp";
        case SolveStatus::MaxIter:
            return "MaxIter";
    }
    return "Unknown";
}

namespace {

struct LagTerm {
    Eigen::Index i;
    Eigen::Index j;
    double w;
};

// Duhamel terms grouped by lag t_i - t_j so that each K_lag is applied once
// per iteration to all columns sharing it.
std::map<double, std::vector<LagTerm>> group_lags(const TimeGrid& grid) {
    std::map<double, std::vector<LagTerm>> groups;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const auto w = grid.trapezoid_weights(i);
        for (std::size_t j = 0; j <= i; ++j)
            groups[grid.gap(i, j)].push_back({static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), w[j]});
    }
    return groups;
}

}  // namespace

SolveReport picard_solve(const ProblemSpec& problem, const TimeGrid& t_grid, const SolveOptions& options) {
    validate_problem(problem);
    HeatSemigroup sg(problem.kernel, *problem.space, options.cache_bytes);
    return picard_solve(problem, sg, t_grid, options);
}

SolveReport picard_solve(const ProblemSpec& problem, const HeatSemigroup& semigroup, const TimeGrid& t_grid,
                         const SolveOptions& options) {
    validate_problem(problem);
    if (!(options.tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
    if (options.max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be positive");
    const Eigen::Index n = problem.space->size();
    if (semigroup.size() != n) throw std::invalid_argument("picard_solve: semigroup and problem grids differ");
    const double phi_sup = problem.phi.maxCoeff();
    const double cap = options.blowup_cap > 0.0 ? options.blowup_cap : 1e6 * std::max(phi_sup, 1.0);
    if (!(cap > phi_sup)) throw std::invalid_argument("picard_solve: blowup_cap must exceed ||phi||_inf");
    const double p = problem.p;
    const auto nodes = static_cast<Eigen::Index>(t_grid.size());

    // Linear part: K_t phi + int_0^t K_tau f dtau (trapezoid, K_0 = I).
    Eigen::MatrixXd U0(n, nodes), base(n, nodes);
    const bool has_f = (problem.f.array() > 0.0).any();
    GridFunction kf_prev = problem.f;
    GridFunction src = GridFunction::Zero(n);
    U0.col(0) = problem.phi;
    base.col(0) = problem.phi;
    for (Eigen::Index i = 1; i < nodes; ++i) {
        const double t = t_grid[static_cast<std::size_t>(i)];
        U0.col(i) = semigroup.apply(t, problem.phi);
        if (has_f) {
            GridFunction kf = semigroup.apply(t, problem.f);
            src += 0.5 * (t - t_grid[static_cast<std::size_t>(i - 1)]) * (kf_prev + kf);
            kf_prev = std::move(kf);
        }
        base.col(i) = U0.col(i) + src;
    }

    const auto groups = group_lags(t_grid);
    SolveReport rep;
    Eigen::MatrixXd U = U0;
    Eigen::Index active = nodes;
    std::vector<int> iterations(static_cast<std::size_t>(nodes), 0);
    bool converged = false;

    for (int k = 1; k <= options.max_iter; ++k) {
        rep.total_iterations = k;
        const Eigen::MatrixXd P = U.leftCols(active).array().pow(p).matrix();
        Eigen::MatrixXd next = base.leftCols(active);
        for (const auto& [lag, terms] : groups) {
            std::vector<const LagTerm*> live;
            for (const auto& term : terms)
                if (term.i < active) live.push_back(&term);
            if (live.empty()) continue;
            if (lag == 0.0) {
                for (const auto* term : live) next.col(term->i) += term->w * P.col(term->j);
                continue;
            }
            Eigen::MatrixXd cols(n, static_cast<Eigen::Index>(live.size()));
            for (std::size_t c = 0; c < live.size(); ++c) cols.col(static_cast<Eigen::Index>(c)) = P.col(live[c]->j);
            const Eigen::MatrixXd y = *semigroup.matrix(lag) * cols;
            for (std::size_t c = 0; c < live.size(); ++c)
                next.col(live[c]->i) += live[c]->w * y.col(static_cast<Eigen::Index>(c));
        }

        // Nodes at or beyond the first cap crossing are frozen out of the iteration.
        Eigen::Index offender = active;
        for (Eigen::Index i = 0; i < active; ++i) {
            const auto col = next.col(i);
            if (!col.allFinite() || col.maxCoeff() > cap) {
                offender = i;
                break;
            }
        }
        const bool shrunk = offender < active;
        if (shrunk) {
            active = offender;
            rep.status = SolveStatus::BlownUp;
            rep.t_blow = t_grid[static_cast<std::size_t>(offender)];
            if (active == 0) break;
        }

        const auto cur = U.leftCols(active);
        const auto nxt = next.leftCols(active);
        const double scale = std::max(1.0, nxt.cwiseAbs().maxCoeff());
        double delta = 0.0;
        for (Eigen::Index i = 0; i < active; ++i) {
            const double d = (nxt.col(i) - cur.col(i)).cwiseAbs().maxCoeff();
            if (d > options.tol * scale) iterations[static_cast<std::size_t>(i)] = k;
            delta = std::max(delta, d);
        }
        if (((nxt - cur).array() < -1e-12 * scale).any()) rep.monotone = false;
        U.leftCols(active) = nxt;
        rep.sup_norm_history.push_back(nxt.cwiseAbs().maxCoeff());
        rep.residual = delta;
        if (!shrunk && delta <= options.tol * scale) {
            converged = true;
            for (Eigen::Index i = 0; i < active; ++i)
                iterations[static_cast<std::size_t>(i)] = std::max(iterations[static_cast<std::size_t>(i)], 1);
            break;
        }
    }

    if (active == nodes) rep.status = converged ? SolveStatus::Converged : SolveStatus::MaxIter;
    for (Eigen::Index i = 0; i < active; ++i) {
        rep.trajectory.times.push_back(t_grid[static_cast<std::size_t>(i)]);
        rep.trajectory.values.emplace_back(U.col(i));
        rep.iterations.push_back(iterations[static_cast<std::size_t>(i)]);
    }
    for (std::size_t i = 1; i < rep.trajectory.times.size(); ++i) {
        const double dt = rep.trajectory.times[i] - rep.trajectory.times[i - 1];
        const double du = (rep.trajectory.values[i] - rep.trajectory.values[i - 1]).cwiseAbs().maxCoeff();
        rep.time_increment_ratio = std::max(rep.time_increment_ratio, du / dt);
    }
    return rep;
}

}  // namespace mmheat
