#pragma once

#include "mmheat/kernel.hpp"
#include "mmheat/semigroup.hpp"
#include "mmheat/space.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mmheat {

struct HarnackConstants;

struct ProblemSpec {
    HeatKernel kernel;
    std::shared_ptr<const MetricMeasureGrid> space;
    GridFunction phi;
    GridFunction f;
    double p = 2.0;
};

// Throws std::invalid_argument when the problem violates its invariants.
void validate_problem(const ProblemSpec& problem);

enum class SolveStatus { Converged, BlownUp, MaxIter };
std::string to_string(SolveStatus s);

struct SolveOptions {
    double tol = 1e-8;  // relative, max norm
    int max_iter = 200;
    // <= 0 selects 1e6 * max(||phi||_inf, 1)
    double blowup_cap = 0.0;
    std::size_t cache_bytes = HeatSemigroup::kDefaultCacheBytes;
};

struct SolveReport {
    // Nodes of the converged prefix; stops before t_blow when blown up.
    Trajectory trajectory;
    SolveStatus status = SolveStatus::MaxIter;
    double t_blow = std::numeric_limits<double>::infinity();
    std::vector<int> iterations;  // per retained node
    int total_iterations = 0;
    std::vector<double> sup_norm_history;
    double residual = 0.0;
    // max_k ||u(t_{k+1}) - u(t_k)||_inf / (t_{k+1} - t_k)
    double time_increment_ratio = 0.0;
    bool monotone = true;
};

SolveReport picard_solve(const ProblemSpec& problem, const TimeGrid& t_grid, const SolveOptions& options = {});
SolveReport picard_solve(const ProblemSpec& problem, const HeatSemigroup& semigroup, const TimeGrid& t_grid,
                         const SolveOptions& options = {});

struct HorizonOptions {
    // Integration stops here when b stays below the cap.
    double t_max = 1e3;
    double min_step = 1e-12;
};

struct HorizonReport {
    double T0_estimate = std::numeric_limits<double>::infinity();
    bool blew_up = false;
    std::vector<double> t_samples;
    std::vector<double> a_samples;
    std::vector<double> b_samples;
    double existence_condition_value = 0.0;
    bool condition_met = false;
    // ||K_t phi||_inf and ||K_t f||_inf at the ODE nodes.
    std::vector<double> phi_norms;
    std::vector<double> f_norms;
};

// Norms of K_t phi and K_t f are evaluated at the ODE nodes only and
// interpolated linearly inside each step.
HorizonReport local_horizon(const ProblemSpec& problem, double ode_step, double blowup_cap,
                            const HorizonOptions& options = {});

struct WitnessOptions {
    // Smallest sample time as a fraction of t_max.
    double t_min_ratio = 1e-2;
    // Exponent must exceed margin + 2 standard errors to count as growth.
    double margin = 0.05;
};

struct WitnessReport {
    std::vector<double> times;
    std::vector<double> sup_values;
    double max_value = 0.0;
    double growth_exponent = 0.0;
    double exponent_stderr = 0.0;
    bool witness = false;
    bool zero_data = false;
};

// W(t) = t^(1/(p-1)) K_{B1 t} phi + t^(p/(p-1)) K_{B1 t} f on log-spaced t,
// with the growth exponent of max_x W fitted in log-log coordinates.
WitnessReport nonexistence_witness(const ProblemSpec& problem, const HarnackConstants& harnack, double t_max,
                                   int t_count, const WitnessOptions& options = {});

}  // namespace mmheat
