#pragma once

#include "mmheat/kernel.hpp"
#include "mmheat/profiles.hpp"
#include "mmheat/semigroup.hpp"
#include "mmheat/space.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace mmheat {

// ---- Harnack-type comparison in time ------------------------------------

struct HarnackConstants {
    double a1 = 0.0;
    double a2 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double A1 = 0.0;
    double A2 = 0.0;
    double B = 0.0;
    double B1 = 0.0;
    double A = 0.0;
};

HarnackConstants harnack_constants(double a1, double a2, double alpha, double beta);

struct HarnackReport {
    // min over points (and columns) of LHS - RHS for each inequality
    double margin1 = 0.0;
    double margin2 = 0.0;
    double margin3 = 0.0;
    bool pass1 = false;
    bool pass2 = false;
    bool pass3 = false;
    bool pass = false;
    double tol = 0.0;
};

struct HarnackOptions {
    double tol = 1e-6;
    // Trapezoid intervals on [0, Bt] and [Bt, t] for the time integral.
    int steps_before = 32;
    int steps_after = 96;
};

// Each column of g is one nonnegative test function; the third inequality
// uses the same function for the initial datum and the source.
HarnackReport verify_harnack(const HeatSemigroup& semigroup, const Eigen::MatrixXd& g, double t,
                             const HarnackConstants& hc, const HarnackOptions& options = {});
HarnackReport verify_harnack(const HeatKernel& kernel, const MetricMeasureGrid& space, const GridFunction& g,
                             double t, const HarnackConstants& hc, const HarnackOptions& options = {});

// ---- Regime classification -------------------------------------------------

enum class Verdict {
    NonexistenceSubcritical,
    NonexistenceCritical,
    NonexistenceAlphaLeBeta,
    NonexistenceIntermediate,
    GlobalExistenceSmallData,
    Indeterminate,
};
std::string to_string(Verdict v);

struct RegimeConditions {
    bool general1 = false;
    bool general4 = false;
    bool general2 = false;
    bool phi_integrable = false;
    bool conservative = false;

    static RegimeConditions from(const ProfilePredicateReport& report, bool conservative);
};

struct RegimeVerdict {
    Verdict verdict = Verdict::Indeterminate;
    std::string cited_case;
    std::vector<std::string> also_cited;
    std::vector<std::string> required_conditions;
    // Set when the verdict still depends on the small-data hypothesis.
    bool conditional = false;
};

// Equality with 1 + beta/alpha or alpha/(alpha - beta) is decided with this
// relative tolerance.
inline constexpr double kExponentTolerance = 1e-12;

RegimeVerdict classify_regime(double alpha, double beta, double p, bool phi_nonzero, bool f_nonzero,
                              const RegimeConditions& conditions);

// ---- Weighted integrals -------------------------------------------------

struct WeightedIntegralReport {
    std::vector<int> x_samples;
    std::vector<double> values;
    double sup_I = 0.0;
    // sup of I(x) (1 + d(x,x0)^lambda1), reported when lambda2 > alpha
    std::optional<double> sup_normalized;
    // Fitted exponent of the radial tail, close to alpha - lambda1 - lambda2.
    double tail_exponent = 0.0;
    bool divergent = false;
};

// I(x) = sum_y w(y) / (d(y,x)^lambda1 (1 + d(y,x0)^lambda2)). The y = x cell
// is replaced by the integral of r^-lambda1 over a ball of equal measure.
WeightedIntegralReport check_weighted_integrals(const MetricMeasureGrid& space, double lambda1, double lambda2,
                                                int x0, const std::vector<int>& x_samples);

// Same singular quadrature with an arbitrary factor h(y) in place of
// 1 / (1 + d(y,x0)^lambda2).
double singular_sum(const MetricMeasureGrid& space, int x, double lambda1, const GridFunction& h);

struct MomentReport {
    std::vector<double> t_samples;
    std::vector<double> ratios;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    // max_ratio / min_ratio
    double spread = 0.0;
    bool bounded = false;
};

// J(t,x)/t^((alpha+lambda)/beta) with J(t,x) = sum_y w d(x,y)^lambda Phi(d(x,y)/t^(1/beta)).
MomentReport check_moment_bound(const MetricMeasureGrid& space, const Profile& profile, double alpha, double beta,
                                double lambda, const std::vector<double>& t_samples, int x = -1);

// ---- Hölder regularity -------------------------------------------------

struct HolderParams {
    double theta1 = 1.0;
    double theta2 = 1.0;
    double sigma = 1.0;
    double nu = 1.0;
    double L = 1.0;
    double beta = 2.0;

    double theta() const;
};

struct HolderEstimate {
    double theta_hat = 0.0;
    double C_hat = 0.0;
    double theoretical_theta = 0.0;
    double theta_fit = 0.0;
    bool pass = false;
    std::size_t pairs = 0;
};

struct HolderOptions {
    double max_distance = 1.0;
    double fit_tolerance = 0.05;
    std::size_t min_pairs = 50;
    std::size_t bins = 24;
};

// Modulus of continuity per log-distance bin, fitted in log-log coordinates;
// theta_hat is capped at 1 and C_hat makes the bound hold on every pair.
HolderEstimate holder_estimate(const GridFunction& u, const MetricMeasureGrid& space, const HolderParams& params,
                               const HolderOptions& options = {});

// ---- Small-data global existence ---------------------------------------------

struct EnvelopeReport {
    bool pass = false;
    double worst_margin = 0.0;
    std::size_t worst_node = 0;
    int worst_point = 0;
    bool negative_value = false;
};

EnvelopeReport envelope_check(const Trajectory& u, double epsilon, double alpha, double beta, int x0,
                              const MetricMeasureGrid& space);

struct ContractionReport {
    bool feasible = false;
    double epsilon_star = 0.0;
    double delta_max = 0.0;
};

ContractionReport contraction_feasibility(double C1_fix, double C3_lip, double p);

struct SmallDataConstants {
    // sup (1 + d^(alpha-beta)) K_t g over the time grid
    double A = 0.0;
    // sup (1 + d^(alpha-beta)) int_0^t K_tau g
    double B = 0.0;
    // sup (1 + d^(alpha-beta)) int_0^t K_(t-tau) e^p with e = (1 + d^(alpha-beta))^-1
    double D = 0.0;
    // sup int_0^t K_(t-tau) e^(p-1)
    double C3 = 0.0;
    double C1 = 0.0;
    // Contributions measured with the time-integrated kernel (all t > 0).
    double B_green = 0.0;
    double D_green = 0.0;
    double C3_green = 0.0;
};

// g = 1 / (1 + d(x,x0)^lambda). Each constant is the larger of the discrete
// trapezoid scheme on t_grid and the time-integrated-kernel quadrature.
SmallDataConstants measure_small_data_constants(const HeatSemigroup& semigroup, const TimeGrid& t_grid, double p,
                                                double lambda);

}  // namespace mmheat
