#include "mmheat/kernel.hpp"
#include "mmheat/numeric.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mmheat;

namespace {

const double kPi = std::numbers::pi;

std::vector<int> interior_samples(const MetricMeasureGrid& g, int count) {
    std::vector<int> out;
    for (int i = 0; i < g.size(); i += std::max(1, g.size() / (4 * count)))
        if (g.boundary_distance(i) >= 0.5 * g.truncation_radius()) out.push_back(i);
    return out;
}

}  // namespace

TEST(KernelEval, GaussWeierstrassOnDiagonal) {
    const auto k = HeatKernel::gauss_weierstrass(1);
    EXPECT_NEAR(k.eval(1.0, 0.0), 0.28209479177387814, 1e-15);
    EXPECT_EQ(k.alpha(), 1.0);
    EXPECT_EQ(k.beta(), 2.0);
    EXPECT_TRUE(k.conservative_claim());
}

TEST(KernelEval, CauchyPoissonOnDiagonal) {
    const auto k = HeatKernel::cauchy_poisson(1);
    EXPECT_NEAR(k.eval(1.0, 0.0), 1.0 / kPi, 1e-15);
    EXPECT_EQ(k.beta(), 1.0);
    // C_n = Gamma((n+1)/2) / pi^((n+1)/2)
    const auto k3 = HeatKernel::cauchy_poisson(3);
    EXPECT_NEAR(k3.eval(1.0, 0.0), std::tgamma(2.0) / (kPi * kPi), 1e-15);
}

TEST(KernelEval, ProfileKernelReproducesGaussWeierstrass) {
    const auto gw = HeatKernel::gauss_weierstrass(1);
    const auto pk = HeatKernel::profile(1.0, 2.0, Profile::gauss(1.0 / std::sqrt(4.0 * kPi), 0.25, 2.0));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> tt(0.01, 10.0), rr(0.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        const double t = tt(rng), r = rr(rng);
        EXPECT_NEAR(pk.eval(t, r), gw.eval(t, r), 1e-13 * gw.eval(t, 0.0));
    }
}

TEST(KernelEval, RejectsNonPositiveTime) {
    const auto k = HeatKernel::gauss_weierstrass(2);
    EXPECT_THROW(k.eval(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(k.eval(-1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(HeatKernel::gauss_weierstrass(4), std::invalid_argument);
}

TEST(KernelEval, SymmetricAndPositiveProperty) {
    const auto space = build_lattice_space(2, 3.0, 13);
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> pick(0, space.size() - 1);
    std::uniform_real_distribution<double> tt(0.01, 5.0);
    for (const auto& k : {HeatKernel::gauss_weierstrass(2), HeatKernel::cauchy_poisson(2)}) {
        for (int i = 0; i < 300; ++i) {
            const int x = pick(rng), y = pick(rng);
            const double t = tt(rng);
            EXPECT_EQ(kernel_eval(k, space, t, x, y), kernel_eval(k, space, t, y, x));
            EXPECT_GT(kernel_eval(k, space, t, x, y), 0.0);
        }
    }
}

TEST(KernelEval, ProfileScalingIdentityProperty) {
    const auto k = HeatKernel::profile(1.7, 2.6, Profile::cauchy(0.8, 3.5));
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int i = 0; i < 300; ++i) {
        const double lam = u(rng), t = u(rng), r = u(rng);
        // k(lam^beta t, r) = lam^-alpha k(t, r / lam)
        const double lhs = k.eval(std::pow(lam, 2.6) * t, r);
        const double rhs = std::pow(lam, -1.7) * k.eval(t, r / lam);
        EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
    }
}

TEST(KernelMoments, ScaledMomentMatchesQuadrature) {
    boost::math::quadrature::exp_sinh<double> integ;
    for (const auto& k : {HeatKernel::gauss_weierstrass(1), HeatKernel::gauss_weierstrass(3),
                          HeatKernel::cauchy_poisson(2), HeatKernel::cauchy_poisson(3)}) {
        for (double m : {0.5, 1.0, 1.5}) {
            const double q = integ.integrate([&](double s) { return std::pow(s, m - 1.0) * k.scaled_profile(s); });
            EXPECT_NEAR(k.scaled_moment(m), q, 1e-9 * q) << k.name() << " m=" << m;
        }
    }
}

TEST(KernelGreen, NewtonianPotentialsInClosedForm) {
    // GW(3): int_0^inf k dt = 1/(4 pi r); CP(2): C_2 / r = 1/(2 pi r)
    const auto gw3 = HeatKernel::gauss_weierstrass(3);
    const auto cp2 = HeatKernel::cauchy_poisson(2);
    for (double r : {0.3, 1.0, 4.0}) {
        EXPECT_NEAR(gw3.green(r), 1.0 / (4.0 * kPi * r), 1e-12 / r);
        EXPECT_NEAR(cp2.green(r), 1.0 / (2.0 * kPi * r), 1e-12 / r);
    }
    boost::math::quadrature::exp_sinh<double> integ;
    const double r = 1.3;
    // Poisson kernel in the plane written out directly: t / (2 pi (t^2 + r^2)^(3/2))
    const double q = integ.integrate([&](double t) { return t / (2.0 * kPi * std::pow(t * t + r * r, 1.5)); });
    EXPECT_NEAR(cp2.green(r), q, 1e-9 * q);
    EXPECT_NEAR(cp2.eval(0.7, r), 0.7 / (2.0 * kPi * std::pow(0.49 + r * r, 1.5)), 1e-14);
    EXPECT_THROW(HeatKernel::gauss_weierstrass(1).green(1.0), std::invalid_argument);
}

TEST(KernelAxioms, GaussWeierstrassOnTwelve) {
    const auto space = build_lattice_space(1, 12.0, 481);
    const auto k = HeatKernel::gauss_weierstrass(1);
    const auto rep = verify_kernel_axioms(k, space, {0.25, 1.0}, interior_samples(space, 16));
    EXPECT_LT(rep.conservative_deficit, 1e-4);
    EXPECT_GT(rep.interior_samples, 0u);
    EXPECT_EQ(rep.symmetry_residual, 0.0);
    EXPECT_FALSE(rep.boundary_warning);
    EXPECT_LE(rep.markov_mass, 1.0 + 1e-4);
}

TEST(KernelAxioms, ChapmanKolmogorovAtOrigin) {
    const auto space = build_lattice_space(1, 12.0, 481);
    const auto rep = verify_kernel_axioms(HeatKernel::gauss_weierstrass(1), space, {0.5}, {space.x0()});
    EXPECT_LT(rep.semigroup_residual, 1e-3);
}

TEST(KernelAxioms, CauchyProfileKernelHasMeasuredMass) {
    const auto space = build_lattice_space(1, 50.0, 1001);
    const auto k = HeatKernel::profile(1.0, 2.0, Profile::cauchy(1.0 / kPi, 2.0));
    const auto rep = verify_kernel_axioms(k, space, {1.0}, {space.x0()});
    // continuum mass: 2 int_0^inf (1+s)^-2 / pi ds = 2/pi
    EXPECT_TRUE(std::isfinite(rep.markov_mass));
    EXPECT_GT(std::abs(rep.markov_mass - 1.0), 0.2);
    EXPECT_NEAR(rep.markov_mass, 2.0 / kPi, 0.05);
    EXPECT_FALSE(rep.conservative_checked);
}

TEST(KernelAxioms, DeficitShrinksWithTruncation) {
    const auto k = HeatKernel::gauss_weierstrass(1);
    double prev = std::numeric_limits<double>::infinity();
    for (double R : {3.0, 4.0, 5.0}) {
        const auto space = build_lattice_space(1, R, static_cast<int>(40 * R) + 1);
        // mass at the origin for t = 1 loses the tail beyond R
        const auto rep = verify_kernel_axioms(k, space, {1.0}, {space.x0()});
        EXPECT_LT(rep.conservative_deficit, prev);
        prev = rep.conservative_deficit;
    }
}

TEST(KernelAxioms, RejectsEmptySamples) {
    const auto space = build_lattice_space(1, 5.0, 11);
    EXPECT_THROW(verify_kernel_axioms(HeatKernel::gauss_weierstrass(1), space, {}, {0}), std::invalid_argument);
    EXPECT_THROW(verify_kernel_axioms(HeatKernel::gauss_weierstrass(1), space, {1.0}, {}), std::invalid_argument);
}

TEST(TwoSided, GaussWeierstrassEqualityCase) {
    const auto space = build_lattice_space(1, 12.0, 241);
    const auto k = HeatKernel::gauss_weierstrass(1);
    const Profile g = Profile::gauss(1.0 / std::sqrt(4.0 * kPi), 0.25, 2.0);
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < space.size(); ++j) pairs.emplace_back(space.x0(), j);
    const auto rep = verify_two_sided(k, g, g, space, {0.1, 1.0, 10.0}, pairs);
    EXPECT_TRUE(rep.ok);
    EXPECT_NEAR(rep.worst_margin, 0.0, 1e-12);
    const auto bad = verify_two_sided(k, g, g.scaled(0.5), space, {1.0}, pairs);
    EXPECT_FALSE(bad.ok);
    EXPECT_FALSE(bad.upper_ok);
}

TEST(TwoSided, CauchyPoissonNaturalProfiles) {
    const auto space = build_lattice_space(1, 50.0, 501);
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < space.size(); ++j) pairs.emplace_back(space.x0(), j);
    const auto cp = HeatKernel::cauchy_poisson(1);
    const auto [lo, up] = natural_profiles(cp);
    EXPECT_TRUE(verify_two_sided(cp, lo, up, space, {0.1, 1.0, 10.0}, pairs).ok);
    // (1+s)^2 <= 2(1+s^2) gives the lower profile C_1/2 (1+s)^-2; the upper
    // side needs 2 C_1 because (1+s)^2 / (1+s^2) peaks at 2 (s = 1).
    const auto narrow = verify_two_sided(cp, Profile::cauchy(0.5 / kPi, 2.0), Profile::cauchy(1.0 / kPi, 2.0), space,
                                         {1.0}, pairs);
    EXPECT_TRUE(narrow.lower_ok);
    EXPECT_FALSE(narrow.upper_ok);
    for (const auto& k : {HeatKernel::cauchy_poisson(2), HeatKernel::cauchy_poisson(3), HeatKernel::gauss_weierstrass(2)}) {
        const auto sp = build_lattice_space(1, 30.0, 301);
        std::vector<std::pair<int, int>> pr;
        for (int j = 0; j < sp.size(); ++j) pr.emplace_back(sp.x0(), j);
        const auto [a, b] = natural_profiles(k);
        EXPECT_TRUE(verify_two_sided(k, a, b, sp, {0.3, 3.0}, pr).ok) << k.name();
    }
}

TEST(KernelHolder, GaussWeierstrassExponents) {
    const auto space = build_lattice_space(1, 6.0, 1201);
    const auto fit = estimate_holder_kernel(HeatKernel::gauss_weierstrass(1), space, logspace(1e-2, 10.0, 32),
                                            holder_pairs(space, 128, 1.0));
    EXPECT_NEAR(fit.sigma, 1.0, 0.05);
    EXPECT_NEAR(fit.nu, 1.0, 0.05);
    // sup over r of (r/2t)(4 pi t)^(-1/2) e^(-r^2/4t) at t = 1
    const double L = std::exp(-0.5) / std::sqrt(8.0 * kPi);
    EXPECT_NEAR(fit.L, L, 0.1 * L);
}

TEST(KernelHolder, CauchyPoissonExponents) {
    const auto space = build_lattice_space(1, 6.0, 1201);
    const auto fit = estimate_holder_kernel(HeatKernel::cauchy_poisson(1), space, logspace(1e-1, 10.0, 32),
                                            holder_pairs(space, 128, 1.0));
    EXPECT_NEAR(fit.sigma, 1.0, 0.05);
    EXPECT_NEAR(fit.nu, 2.0, 0.1);
}

TEST(KernelHolder, SpatiallyConstantSurrogate) {
    const auto space = build_lattice_space(1, 3.0, 61);
    const auto k = HeatKernel::profile(1.0, 2.0, Profile::table({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}));
    const auto fit = estimate_holder_kernel(k, space, {0.1, 1.0}, holder_pairs(space, 16, 1.0));
    EXPECT_NEAR(fit.L, 0.0, 1e-12);
}

TEST(KernelHolder, DegenerateSamplesRejected) {
    const auto space = build_lattice_space(1, 3.0, 61);
    const auto k = HeatKernel::gauss_weierstrass(1);
    EXPECT_THROW(estimate_holder_kernel(k, space, {1.0}, holder_pairs(space, 16, 1.0)), std::invalid_argument);
    EXPECT_THROW(estimate_holder_kernel(k, space, {0.5, 1.0}, {{0, 0}}), std::invalid_argument);
}
