#include "mmheat/csv.hpp"
#include "mmheat/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mmheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

HeatKernel HeatKernel::gauss_weierstrass(int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("gauss_weierstrass: dimension must be 1, 2 or 3");
    HeatKernel k;
    k.family_ = Family::GaussWeierstrass;
    k.n_ = n;
    k.alpha_ = n;
    k.beta_ = 2.0;
    k.conservative_ = true;
    k.norm_ = std::pow(4.0 * std::numbers::pi, -0.5 * n);
    return k;
}

HeatKernel HeatKernel::cauchy_poisson(int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("cauchy_poisson: dimension must be 1, 2 or 3");
    HeatKernel k;
    k.family_ = Family::CauchyPoisson;
    k.n_ = n;
    k.alpha_ = n;
    k.beta_ = 1.0;
    k.conservative_ = true;
    k.norm_ = std::tgamma(0.5 * (n + 1)) / std::pow(std::numbers::pi, 0.5 * (n + 1));
    return k;
}

HeatKernel HeatKernel::profile(double alpha, double beta, Profile phi, bool conservative_claim) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("profile kernel: alpha must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("profile kernel: beta must be positive");
    HeatKernel k;
    k.family_ = Family::Profile;
    k.n_ = 0;
    k.alpha_ = alpha;
    k.beta_ = beta;
    k.conservative_ = conservative_claim;
    k.profile_ = std::move(phi);
    return k;
}

double HeatKernel::eval(double t, double r) const {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("kernel: t must be positive");
    switch (family_) {
        case Family::GaussWeierstrass:
            return std::pow(t, -0.5 * n_) * norm_ * std::exp(-r * r / (4.0 * t));
        case Family::CauchyPoisson: {
            const double s = r / t;
            return norm_ * std::pow(t, -static_cast<double>(n_)) * std::pow(1.0 + s * s, -0.5 * (n_ + 1));
        }
        case Family::Profile:
            return std::pow(t, -alpha_ / beta_) * (*profile_)(r * std::pow(t, -1.0 / beta_));
    }
    return 0.0;
}

double HeatKernel::scaled_profile(double s) const {
    if (!(s >= 0.0)) throw std::invalid_argument("kernel: s must be nonnegative");
    switch (family_) {
        case Family::GaussWeierstrass:
            return norm_ * std::exp(-0.25 * s * s);
        case Family::CauchyPoisson:
            return norm_ * std::pow(1.0 + s * s, -0.5 * (n_ + 1));
        case Family::Profile:
            return (*profile_)(s);
    }
    return 0.0;
}

double HeatKernel::scaled_moment(double k) const {
    if (!(k > 0.0)) throw std::invalid_argument("kernel: moment order must be positive");
    switch (family_) {
        case Family::GaussWeierstrass:
            return norm_ * std::tgamma(0.5 * k) * std::pow(2.0, k - 1.0);
        case Family::CauchyPoisson: {
            const double b = 0.5 * (n_ + 1) - 0.5 * k;
            if (!(b > 0.0)) return kInf;
            return norm_ * 0.5 * std::exp(log_beta(0.5 * k, b));
        }
        case Family::Profile:
            return profile_->moment(k);
    }
    return kInf;
}

double HeatKernel::green(double r) const {
    if (!(alpha_ > beta_)) throw std::invalid_argument("kernel: time-integrated kernel needs alpha > beta");
    if (!(r > 0.0)) throw std::invalid_argument("kernel: green function needs r > 0");
    return beta_ * std::pow(r, beta_ - alpha_) * scaled_moment(alpha_ - beta_);
}

std::string HeatKernel::name() const {
    switch (family_) {
        case Family::GaussWeierstrass:
            return "gauss-weierstrass(" + std::to_string(n_) + ")";
        case Family::CauchyPoisson:
            return "cauchy-poisson(" + std::to_string(n_) + ")";
        case Family::Profile:
            return "profile(alpha=" + csv::fmt(alpha_) + ";beta=" + csv::fmt(beta_) + ";" + profile_->describe() + ")";
    }
    return "unknown";
}

double kernel_eval(const HeatKernel& kernel, const MetricMeasureGrid& space, double t, int x, int y) {
    if (x < 0 || x >= space.size() || y < 0 || y >= space.size())
        throw std::out_of_range("kernel_eval: point index out of range");
    return kernel.eval(t, space.dist(x, y));
}

std::pair<Profile, Profile> natural_profiles(const HeatKernel& kernel) {
    switch (kernel.family()) {
        case HeatKernel::Family::GaussWeierstrass: {
            const auto g = Profile::gauss(kernel.scaled_profile(0.0), 0.25, 2.0);
            return {g, g};
        }
        case HeatKernel::Family::CauchyPoisson: {
            // (1+s)^2 / 2 <= 1 + s^2 <= (1+s)^2
            const double c = kernel.scaled_profile(0.0);
            const double g = kernel.dimension() + 1.0;
            return {Profile::cauchy(c, g), Profile::cauchy(c * std::pow(2.0, 0.5 * g), g)};
        }
        case HeatKernel::Family::Profile:
            return {*kernel.profile(), *kernel.profile()};
    }
    throw std::logic_error("natural_profiles: unknown family");
}

}  // namespace mmheat
