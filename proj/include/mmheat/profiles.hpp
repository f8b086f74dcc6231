#pragma once

#include "mmheat/space.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace mmheat {

struct GaussType {
    double C = 1.0;
    double c = 1.0;
    double gamma = 2.0;
};

struct CauchyType {
    double C = 1.0;
    double gamma = 1.0;
};

// Monotone samples with s[0] = 0, interpolated piecewise linearly and
// extended past the last sample by the power law through the last two samples.
struct TableProfile {
    std::vector<double> s;
    std::vector<double> v;
};

// Large-s behaviour used to decide the profile conditions asymptotically.
struct TailClass {
    enum class Kind { Gauss, Power };
    Kind kind = Kind::Power;
    double c = 0.0;      // Gauss: exp(-c s^gamma)
    double gamma = 0.0;  // Gauss exponent
    double q = 0.0;      // Power: s^-q
};

class Profile {
public:
    using Family = std::variant<GaussType, CauchyType, TableProfile>;

    static Profile gauss(double C, double c, double gamma);
    static Profile cauchy(double C, double gamma);
    static Profile table(std::vector<double> s, std::vector<double> v);

    double operator()(double s) const;
    double log_value(double s) const;
    const Family& family() const { return family_; }
    std::string describe() const;
    Profile scaled(double factor) const;
    TailClass tail() const;
    // Integral of s^(k-1) Phi(s) over (0, inf); +inf when divergent.
    double moment(double k) const;

private:
    explicit Profile(Family f) : family_(std::move(f)) {}
    Family family_;
};

double profile_eval(const Profile& profile, double s);

// Witness (factor, scale) for Phi_a(s)^power >= factor * Phi_b(scale * s).
struct ScaleWitness {
    bool holds = false;
    double factor = 0.0;
    double scale = 0.0;
    bool tail_feasible = false;
    bool from_algebra = false;
    // Smallest log-space slack over the verification grid.
    double min_slack = 0.0;
};

struct General4Witness {
    bool holds = false;
    double b1 = 0.0;
    double b2 = 0.0;
    double b3 = 0.0;
    bool from_algebra = false;
    double min_slack = 0.0;
};

struct IntegrabilityFlag {
    bool finite = false;
    double value = 0.0;
};

struct ProfilePredicateReport {
    ScaleWitness general1;  // factor = a1, scale = a2
    General4Witness general4;
    ScaleWitness general2;  // factor = c1, scale = c2
    IntegrabilityFlag phi;
    IntegrabilityFlag general5;
};

// s = 0 plus log-spaced points in [1e-3, 1e3].
std::vector<double> verification_grid(std::size_t count = 512);

ProfilePredicateReport check_profile_conditions(const Profile& phi1, const Profile& phi2, double p,
                                                double alpha);

// Independent re-check of a reported witness on the verification grid.
bool verify_scale_witness(const Profile& phi1, const Profile& phi2, double power, double factor,
                          double scale);
bool verify_general4(const Profile& phi2, double b1, double b2, double b3);

struct General3Report {
    bool holds = false;
    double worst_slack = 0.0;
    std::size_t samples = 0;
};

// Consequence of general4 on the grid: for sampled (x, y) and t,
// Phi2(d(x,y)/t^(1/beta)) / Phi2(b2 d(x,x0)/t^(1/beta)) >= b1 Phi2(b3 d(y,x0)/t^(1/beta)).
General3Report check_general3(const Profile& phi2, const General4Witness& w, const MetricMeasureGrid& space,
                              double beta, const std::vector<double>& t_samples, std::size_t pairs,
                              std::uint64_t seed);

}  // namespace mmheat
