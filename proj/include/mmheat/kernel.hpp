#pragma once

#include "mmheat/profiles.hpp"
#include "mmheat/space.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mmheat {

class HeatKernel {
public:
    enum class Family { GaussWeierstrass, CauchyPoisson, Profile };

    static HeatKernel gauss_weierstrass(int n);
    static HeatKernel cauchy_poisson(int n);
    static HeatKernel profile(double alpha, double beta, Profile phi, bool conservative_claim = false);

    // Density at time t > 0 for two points at distance r.
    double eval(double t, double r) const;
    // t^(alpha/beta) k(t, r) written as a function of s = r / t^(1/beta).
    double scaled_profile(double s) const;
    // Integral over (0, inf) of s^(k-1) times the scaled profile; +inf if divergent.
    double scaled_moment(double k) const;
    // Integral of k(tau, r) over tau in (0, inf), finite only for alpha > beta.
    double green(double r) const;

    Family family() const { return family_; }
    int dimension() const { return n_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    bool conservative_claim() const { return conservative_; }
    const std::optional<Profile>& profile() const { return profile_; }
    std::string name() const;

private:
    HeatKernel() = default;
    Family family_ = Family::GaussWeierstrass;
    int n_ = 1;
    double alpha_ = 1.0;
    double beta_ = 2.0;
    bool conservative_ = true;
    double norm_ = 1.0;
    std::optional<Profile> profile_;
};

double kernel_eval(const HeatKernel& kernel, const MetricMeasureGrid& space, double t, int x, int y);

// Profiles that bracket a built-in kernel, or the kernel's own profile twice.
std::pair<Profile, Profile> natural_profiles(const HeatKernel& kernel);

struct TwoSidedReport {
    bool ok = false;
    bool lower_ok = false;
    bool upper_ok = false;
    // Minimum relative slack of each side; the overall margin is their minimum.
    double lower_margin = 0.0;
    double upper_margin = 0.0;
    double worst_margin = 0.0;
    double worst_s = 0.0;
    std::size_t samples = 0;
};

TwoSidedReport verify_two_sided(const HeatKernel& kernel, const Profile& phi1, const Profile& phi2,
                                const MetricMeasureGrid& space, const std::vector<double>& t_samples,
                                const std::vector<std::pair<int, int>>& pair_samples);

struct KernelHolderFit {
    double L = 0.0;
    double nu = 0.0;
    double sigma = 0.0;
    // Unconstrained least-squares exponents before projection.
    double nu_raw = 0.0;
    double sigma_raw = 0.0;
    bool projected = false;
    std::size_t fit_samples = 0;
    std::size_t samples = 0;
};

struct HolderFitOptions {
    // Samples enter the regression when d(x1,x2) <= regime_fraction * t^(1/beta).
    double regime_fraction = 0.25;
    // Differences below this relative level are treated as zero.
    double zero_level = 1e-13;
};

KernelHolderFit estimate_holder_kernel(const HeatKernel& kernel, const MetricMeasureGrid& space,
                                       const std::vector<double>& t_samples,
                                       const std::vector<std::pair<int, int>>& pair_samples,
                                       const HolderFitOptions& options = {});

struct KernelAxiomReport {
    double markov_mass = 0.0;
    double min_mass = 0.0;
    double symmetry_residual = 0.0;
    // max |int k(s,x,y) k(t,y,z) dy - k(s+t,x,z)| / max(k(s+t,x,z), 1e-6 k(s+t,x,x))
    double semigroup_residual = 0.0;
    double conservative_deficit = 0.0;
    bool conservative_checked = false;
    std::size_t interior_samples = 0;
    // Largest kernel mass landing in the outer 5% shell of the truncated domain.
    double boundary_mass = 0.0;
    bool boundary_warning = false;
    std::optional<TwoSidedReport> two_sided;
    std::optional<KernelHolderFit> holder_estimates;
};

struct AxiomOptions {
    double boundary_tolerance = 1e-4;
    std::optional<std::pair<Profile, Profile>> profiles;
    bool fit_holder = false;
};

KernelAxiomReport verify_kernel_axioms(const HeatKernel& kernel, const MetricMeasureGrid& space,
                                       const std::vector<double>& t_samples, const std::vector<int>& x_samples,
                                       const AxiomOptions& options = {});

// Default sample design for estimate_holder_kernel: pairs (x0, x) with
// log-spaced distances up to max_distance.
std::vector<std::pair<int, int>> holder_pairs(const MetricMeasureGrid& space, std::size_t count,
                                              double max_distance);

}  // namespace mmheat
