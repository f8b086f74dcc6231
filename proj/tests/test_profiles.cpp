#include "mmheat/profiles.hpp"
#include "mmheat/space.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mmheat;

namespace {

// Moment integral by double-exponential quadrature, independent of the
// closed forms in Profile::moment.
double quad_moment(const Profile& phi, double k) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([&](double s) { return std::pow(s, k - 1.0) * phi(s); });
}

}  // namespace

TEST(ProfileEval, Examples) {
    EXPECT_DOUBLE_EQ(profile_eval(Profile::gauss(1.0, 1.0, 2.0), 0.0), 1.0);
    EXPECT_DOUBLE_EQ(profile_eval(Profile::cauchy(1.0, 3.0), 1.0), 0.125);
    const double C = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    EXPECT_NEAR(profile_eval(Profile::gauss(C, 0.25, 2.0), 2.0), 0.10378, 1e-5);
    EXPECT_NEAR(profile_eval(Profile::gauss(C, 0.25, 2.0), 2.0), C * std::exp(-1.0), 1e-15);
}

TEST(ProfileEval, NegativeArgumentRejected) {
    EXPECT_THROW(profile_eval(Profile::cauchy(1.0, 2.0), -0.1), std::invalid_argument);
    EXPECT_THROW(Profile::gauss(0.0, 1.0, 2.0), std::invalid_argument);
    EXPECT_THROW(Profile::cauchy(1.0, -1.0), std::invalid_argument);
}

TEST(ProfileEval, PositiveAndNonIncreasingProperty) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> par(0.2, 4.0), ss(0.0, 50.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Profile g = Profile::gauss(par(rng), par(rng), par(rng));
        const Profile c = Profile::cauchy(par(rng), par(rng));
        for (int k = 0; k < 50; ++k) {
            double a = ss(rng), b = ss(rng);
            if (a > b) std::swap(a, b);
            EXPECT_GE(g(a), g(b));
            EXPECT_GE(c(a), c(b));
            EXPECT_GT(c(b), 0.0);
            EXPECT_GE(g(b), 0.0);
        }
    }
}

TEST(TableProfile, InterpolatesAndExtrapolates) {
    const auto t = Profile::table({0.0, 1.0, 2.0}, {1.0, 0.5, 0.25});
    EXPECT_DOUBLE_EQ(t(0.5), 0.75);
    EXPECT_DOUBLE_EQ(t(2.0), 0.25);
    // power law through the last two samples: q = 1
    EXPECT_NEAR(t(4.0), 0.125, 1e-15);
    EXPECT_THROW(Profile::table({0.0, 1.0}, {1.0, 0.5}), std::invalid_argument);
    EXPECT_THROW(Profile::table({0.1, 1.0, 2.0}, {1.0, 0.5, 0.2}), std::invalid_argument);
    EXPECT_THROW(Profile::table({0.0, 1.0, 2.0}, {1.0, 1.5, 0.2}), std::invalid_argument);
    EXPECT_THROW(Profile::table({0.0, 2.0, 1.0}, {1.0, 0.5, 0.2}), std::invalid_argument);
}

TEST(ProfileMoment, MatchesIndependentQuadrature) {
    const Profile g = Profile::gauss(0.7, 0.3, 1.5);
    const Profile c = Profile::cauchy(2.0, 4.5);
    const Profile t = Profile::table({0.0, 0.5, 1.0, 3.0}, {1.0, 0.8, 0.3, 0.01});
    for (double k : {0.5, 1.0, 2.0, 3.0}) {
        EXPECT_NEAR(g.moment(k), quad_moment(g, k), 1e-8 * quad_moment(g, k));
        EXPECT_NEAR(c.moment(k), quad_moment(c, k), 1e-8 * quad_moment(c, k));
    }
    // table: exact piecewise integral plus the power-law tail
    const double q = std::log(0.3 / 0.01) / std::log(3.0);
    for (double k : {1.0, 2.0}) {
        boost::math::quadrature::tanh_sinh<double> ts;
        double inner = 0.0;
        const double knots[] = {0.0, 0.5, 1.0, 3.0};
        for (int i = 0; i < 3; ++i)
            inner += ts.integrate([&](double s) { return std::pow(s, k - 1.0) * t(s); }, knots[i], knots[i + 1]);
        const double tail = 0.01 * std::pow(3.0, k) / (q - k);
        EXPECT_NEAR(t.moment(k), inner + tail, 1e-9);
    }
    EXPECT_TRUE(std::isinf(Profile::cauchy(1.0, 2.0).moment(2.0)));
}

TEST(ProfileConditions, GaussPairWitnesses) {
    const Profile g = Profile::gauss(1.0, 0.25, 2.0);
    const auto rep = check_profile_conditions(g, g, 2.0, 1.0);
    ASSERT_TRUE(rep.general1.holds);
    EXPECT_NEAR(rep.general1.factor, 1.0, 1e-12);
    EXPECT_NEAR(rep.general1.scale, 2.0, 1e-12);
    ASSERT_TRUE(rep.general2.holds);
    EXPECT_NEAR(rep.general2.factor, 1.0, 1e-12);
    EXPECT_NEAR(rep.general2.scale, std::sqrt(2.0), 1e-12);
    EXPECT_TRUE(rep.general4.holds);
    EXPECT_TRUE(rep.phi.finite);
    EXPECT_TRUE(rep.general5.finite);
    // independent re-check of every reported witness
    EXPECT_TRUE(verify_scale_witness(g, g, 1.0, rep.general1.factor, rep.general1.scale));
    EXPECT_TRUE(verify_scale_witness(g, g, 2.0, rep.general2.factor, rep.general2.scale));
    EXPECT_TRUE(verify_general4(g, rep.general4.b1, rep.general4.b2, rep.general4.b3));
    EXPECT_GT(rep.general1.scale, 1.0);
}

TEST(ProfileConditions, CauchyPairFailsGeneral2) {
    const Profile c = Profile::cauchy(1.0, 3.0);
    const auto rep = check_profile_conditions(c, c, 2.0, 2.0);
    EXPECT_FALSE(rep.general2.holds);
    EXPECT_TRUE(rep.general1.holds);
    EXPECT_TRUE(rep.general4.holds);
    EXPECT_TRUE(verify_scale_witness(c, c, 1.0, rep.general1.factor, rep.general1.scale));
}

TEST(ProfileConditions, CauchyIntegrabilityThreshold) {
    const Profile c = Profile::cauchy(1.0, 3.0);
    const auto a2 = check_profile_conditions(c, c, 2.0, 2.0);
    EXPECT_TRUE(a2.phi.finite);
    // int s (1+s)^-3 ds = B(2, 1) = 1/2
    EXPECT_NEAR(a2.phi.value, boost::math::beta(2.0, 1.0), 1e-10);
    EXPECT_FALSE(a2.general5.finite);
    const auto a3 = check_profile_conditions(c, c, 2.0, 3.0);
    EXPECT_FALSE(a3.phi.finite);
}

TEST(ProfileConditions, RejectsBadExponent) {
    const Profile g = Profile::gauss(1.0, 1.0, 2.0);
    EXPECT_THROW(check_profile_conditions(g, g, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(check_profile_conditions(g, g, 2.0, 0.0), std::invalid_argument);
}

TEST(ProfileConditions, WitnessesVerifyAndGeneral5ImpliesPhiProperty) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> C(0.2, 3.0), c(0.1, 2.0), gam(0.5, 3.0), cg(1.0, 6.0), pp(1.1, 4.0),
        al(0.5, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double gamma = gam(rng);
        const Profile g1 = Profile::gauss(C(rng), c(rng) + 0.5, gamma);
        const Profile g2 = Profile::gauss(C(rng), c(rng), gamma);
        const Profile c1 = Profile::cauchy(C(rng), cg(rng));
        const double p = pp(rng), alpha = al(rng);
        for (const auto& [a, b] : {std::pair{g1, g2}, std::pair{c1, c1}, std::pair{g1, c1}}) {
            const auto rep = check_profile_conditions(a, b, p, alpha);
            if (rep.general1.holds) {
                EXPECT_TRUE(verify_scale_witness(a, b, 1.0, rep.general1.factor, rep.general1.scale));
                EXPECT_GT(rep.general1.scale, 1.0);
                EXPECT_LE(rep.general1.factor, 1.0);
            }
            if (rep.general2.holds)
                EXPECT_TRUE(verify_scale_witness(a, b, p, rep.general2.factor, rep.general2.scale));
            if (rep.general4.holds) EXPECT_TRUE(verify_general4(b, rep.general4.b1, rep.general4.b2, rep.general4.b3));
            if (rep.general5.finite) EXPECT_TRUE(rep.phi.finite);
        }
    }
}

TEST(ProfileConditions, GaussGeneral4FromConvexity) {
    for (double gamma : {1.0, 1.5, 2.0, 3.0}) {
        const Profile g = Profile::gauss(2.0, 0.7, gamma);
        const auto rep = check_profile_conditions(g, g, 2.0, 1.0);
        ASSERT_TRUE(rep.general4.holds);
        // (x+y)^gamma <= 2^(gamma-1)(x^gamma + y^gamma)
        EXPECT_NEAR(rep.general4.b2, std::pow(2.0, (gamma - 1.0) / gamma), 1e-12);
        EXPECT_NEAR(rep.general4.b1, 0.5, 1e-12);
    }
}

TEST(General3, ConsequenceHoldsOnLattice) {
    const Profile g = Profile::gauss(1.0, 0.25, 2.0);
    const auto rep = check_profile_conditions(g, g, 2.0, 1.0);
    const auto space = build_lattice_space(1, 10.0, 201);
    const auto r3 = check_general3(g, rep.general4, space, 2.0, {0.1, 1.0, 10.0}, 500, 3);
    EXPECT_TRUE(r3.holds);
    EXPECT_EQ(r3.samples, 1500u);
    const Profile c = Profile::cauchy(1.0, 3.0);
    const auto rc = check_profile_conditions(c, c, 2.0, 1.0);
    EXPECT_TRUE(check_general3(c, rc.general4, space, 1.0, {0.1, 1.0, 10.0}, 500, 4).holds);
}
