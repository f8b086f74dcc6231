#include "mmheat/analysis.hpp"
#include "mmheat/numeric.hpp"
#include "mmheat/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mmheat;

namespace {

const double kPi = std::numbers::pi;

const MetricMeasureGrid& harnack_grid() {
    static const auto g = build_lattice_space(1, 12.0, 481);
    return g;
}

RegimeConditions all_conditions() {
    RegimeConditions c;
    c.general1 = c.general4 = c.general2 = c.phi_integrable = c.conservative = true;
    return c;
}

// Reference decision table with exact integer comparisons; p = num / den.
struct Reference {
    Verdict verdict;
    std::string tag;
};

Reference reference_verdict(int a, int b, int num, int den, bool phi, bool f, const RegimeConditions& c) {
    const bool data = phi || f;
    const bool sub = num * a < (a + b) * den;
    const bool crit = num * a == (a + b) * den;
    const bool a_gt_b = a > b;
    const bool below_int = a_gt_b && num * (a - b) < a * den;
    const bool above_int = a_gt_b && num * (a - b) > a * den;
    if (f && !a_gt_b) return {Verdict::NonexistenceAlphaLeBeta, "thm2.3(ii)"};
    if (f && below_int) return {Verdict::NonexistenceIntermediate, "thm2.3(iii)"};
    if (data && sub) return {Verdict::NonexistenceSubcritical, "thm2.3(i)"};
    if (data && crit && c.general1 && c.general4 && c.general2 && c.conservative)
        return {Verdict::NonexistenceCritical, "thm2.4"};
    if (above_int && c.phi_integrable && c.conservative) return {Verdict::GlobalExistenceSmallData, "thm3.4"};
    return {Verdict::Indeterminate, "none"};
}

}  // namespace

TEST(HarnackConstantsTest, Examples) {
    const auto h = harnack_constants(1.0, 2.0, 1.0, 2.0);
    EXPECT_DOUBLE_EQ(h.A1, 0.5);
    EXPECT_DOUBLE_EQ(h.B, 0.25);
    EXPECT_DOUBLE_EQ(h.A2, 0.1875);
    EXPECT_DOUBLE_EQ(h.B1, 0.0625);
    EXPECT_DOUBLE_EQ(h.A, 0.1875);
    const auto g = harnack_constants(0.5, 2.0, 2.0, 2.0);
    EXPECT_DOUBLE_EQ(g.A1, 0.125);
    EXPECT_DOUBLE_EQ(g.A2, 0.0234375);
    EXPECT_THROW(harnack_constants(1.0, 1.0 + 1e-7, 1.0, 2.0), std::invalid_argument);
    EXPECT_THROW(harnack_constants(1.0, 0.5, 1.0, 2.0), std::invalid_argument);
    EXPECT_THROW(harnack_constants(1.5, 2.0, 1.0, 2.0), std::invalid_argument);
    EXPECT_THROW(harnack_constants(0.0, 2.0, 1.0, 2.0), std::invalid_argument);
    // A2 -> 0 as a2 -> 1
    EXPECT_LT(harnack_constants(1.0, 1.0 + 2e-6, 1.0, 2.0).A2, 1e-5);
}

TEST(HarnackConstantsTest, FormulaIdentitiesProperty) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> a1(0.01, 1.0), a2(1.01, 10.0), ab(0.1, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const auto h = harnack_constants(a1(rng), a2(rng), ab(rng), ab(rng));
        EXPECT_EQ(h.B1, h.B * h.B);
        EXPECT_EQ(h.A, std::min(h.A1 * h.A1, h.A2));
        EXPECT_GT(h.A2, 0.0);
        EXPECT_LT(h.B, 1.0);
    }
}

TEST(VerifyHarnack, RandomDataAtUnitTime) {
    const auto hc = harnack_constants(1.0, 2.0, 1.0, 2.0);
    HeatSemigroup sg(HeatKernel::gauss_weierstrass(1), harnack_grid());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd g(harnack_grid().size(), 10);
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = u(rng);
    const auto rep = verify_harnack(sg, g, 1.0, hc);
    EXPECT_TRUE(rep.pass1);
    EXPECT_TRUE(rep.pass2);
    EXPECT_TRUE(rep.pass3);
    EXPECT_GE(std::min({rep.margin1, rep.margin2, rep.margin3}), -1e-6);
}

TEST(VerifyHarnack, ZeroDataHasZeroMargins) {
    const auto hc = harnack_constants(1.0, 2.0, 1.0, 2.0);
    const auto rep =
        verify_harnack(HeatKernel::gauss_weierstrass(1), harnack_grid(), GridFunction::Zero(harnack_grid().size()), 1.0, hc);
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.margin1, 0.0);
    EXPECT_EQ(rep.margin2, 0.0);
    EXPECT_EQ(rep.margin3, 0.0);
}

TEST(VerifyHarnack, InflatedConstantFailsForPeakedData) {
    auto hc = harnack_constants(1.0, 2.0, 1.0, 2.0);
    hc.A1 = 1.5;
    GridFunction g = GridFunction::Zero(harnack_grid().size());
    g[harnack_grid().x0()] = 10.0;
    const auto rep = verify_harnack(HeatKernel::gauss_weierstrass(1), harnack_grid(), g, 0.25, hc);
    EXPECT_FALSE(rep.pass1);
    EXPECT_FALSE(rep.pass);
    EXPECT_LT(rep.margin1, -1e-3);
}

TEST(VerifyHarnack, RejectsNegativeData) {
    const auto hc = harnack_constants(1.0, 2.0, 1.0, 2.0);
    GridFunction g = GridFunction::Ones(harnack_grid().size());
    g[7] = -1.0;
    EXPECT_THROW(verify_harnack(HeatKernel::gauss_weierstrass(1), harnack_grid(), g, 1.0, hc), std::invalid_argument);
    EXPECT_THROW(verify_harnack(HeatKernel::gauss_weierstrass(1), harnack_grid(), GridFunction::Ones(harnack_grid().size()),
                                0.0, hc),
                 std::invalid_argument);
}

TEST(ClassifyRegime, TruthTable) {
    const RegimeConditions none;
    const auto all = all_conditions();

    auto v = classify_regime(1, 2, 2, true, false, none);
    EXPECT_EQ(v.verdict, Verdict::NonexistenceSubcritical);
    EXPECT_EQ(v.cited_case, "thm2.3(i)");

    v = classify_regime(1, 2, 5, false, true, none);
    EXPECT_EQ(v.verdict, Verdict::NonexistenceAlphaLeBeta);
    EXPECT_EQ(v.cited_case, "thm2.3(ii)");

    v = classify_regime(3, 2, 2, false, true, none);
    EXPECT_EQ(v.verdict, Verdict::NonexistenceIntermediate);
    EXPECT_EQ(v.cited_case, "thm2.3(iii)");
    // 2 >= 1 + 2/3, so case (i) is not cited alongside
    EXPECT_TRUE(v.also_cited.empty());

    v = classify_regime(1, 2, 3, true, false, all);
    EXPECT_EQ(v.verdict, Verdict::NonexistenceCritical);
    EXPECT_EQ(v.cited_case, "thm2.4");

    v = classify_regime(3, 2, 4, true, false, all);
    EXPECT_EQ(v.verdict, Verdict::GlobalExistenceSmallData);
    EXPECT_EQ(v.cited_case, "thm3.4");
    EXPECT_TRUE(v.conditional);

    v = classify_regime(3, 2, 3, false, true, all);
    EXPECT_EQ(v.verdict, Verdict::Indeterminate);
    EXPECT_EQ(v.cited_case, "none");
}

TEST(ClassifyRegime, IntermediateAlsoCitesSubcritical) {
    const auto v = classify_regime(3, 2, 1.5, true, true, {});
    EXPECT_EQ(v.verdict, Verdict::NonexistenceIntermediate);
    ASSERT_EQ(v.also_cited.size(), 1u);
    EXPECT_EQ(v.also_cited[0], "thm2.3(i)");
}

TEST(ClassifyRegime, CriticalNeedsEveryCondition) {
    for (int drop = 0; drop < 4; ++drop) {
        auto c = all_conditions();
        if (drop == 0) c.general1 = false;
        if (drop == 1) c.general4 = false;
        if (drop == 2) c.general2 = false;
        if (drop == 3) c.conservative = false;
        EXPECT_EQ(classify_regime(1, 2, 3, true, false, c).verdict, Verdict::Indeterminate) << drop;
    }
    // within the exponent tolerance of the critical value
    EXPECT_EQ(classify_regime(1, 2, 3.0 * (1.0 + 1e-14), true, false, all_conditions()).verdict,
              Verdict::NonexistenceCritical);
}

TEST(ClassifyRegime, CaseTwoIgnoresPProperty) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> pp(1.0 + 1e-9, 100.0), beta(0.1, 5.0), frac(0.05, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double b = beta(rng);
        const auto v = classify_regime(frac(rng) * b, b, pp(rng), false, true, {});
        EXPECT_EQ(v.verdict, Verdict::NonexistenceAlphaLeBeta);
    }
}

TEST(ClassifyRegime, FuzzAgainstReferenceTable) {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> ab(1, 6), flag(0, 1);
    // p on a grid of quarters plus the two critical values of each draw
    std::uniform_int_distribution<int> quarter(5, 40), choose(0, 2);
    for (int i = 0; i < 1000; ++i) {
        const int a = ab(rng), b = ab(rng);
        int num = quarter(rng), den = 4;
        const int c = choose(rng);
        if (c == 1) num = a + b, den = a;
        if (c == 2 && a > b) num = a, den = a - b;
        const double p = c == 1 ? 1.0 + static_cast<double>(b) / a : static_cast<double>(num) / den;
        RegimeConditions cond;
        cond.general1 = flag(rng);
        cond.general4 = flag(rng);
        cond.general2 = flag(rng);
        cond.phi_integrable = flag(rng);
        cond.conservative = flag(rng);
        const bool phi = flag(rng), f = flag(rng);
        const auto v = classify_regime(a, b, p, phi, f, cond);
        const auto again = classify_regime(a, b, p, phi, f, cond);
        const auto ref = reference_verdict(a, b, num, den, phi, f, cond);
        EXPECT_EQ(v.verdict, again.verdict);
        EXPECT_EQ(v.verdict, ref.verdict) << a << ' ' << b << ' ' << p << ' ' << phi << f;
        EXPECT_EQ(v.cited_case, ref.tag);
        EXPECT_EQ(v.conditional, v.verdict == Verdict::GlobalExistenceSmallData);
        EXPECT_EQ(v.required_conditions.empty(), v.verdict == Verdict::Indeterminate);
    }
}

TEST(ClassifyRegime, Errors) {
    EXPECT_THROW(classify_regime(1, 2, 1.0, true, false, {}), std::invalid_argument);
    EXPECT_THROW(classify_regime(0, 2, 2.0, true, false, {}), std::invalid_argument);
    EXPECT_THROW(classify_regime(1, 2, std::nan(""), true, false, {}), std::invalid_argument);
    EXPECT_EQ(to_string(Verdict::NonexistenceCritical), "NonexistenceCritical");
}

TEST(WeightedIntegrals, FiniteAndResolutionStable) {
    for (double lambda2 : {1.0, 2.0}) {
        const auto coarse = build_lattice_space(1, 50.0, 1001);
        const auto fine = build_lattice_space(1, 50.0, 2001);
        auto samples = [](const MetricMeasureGrid& g) {
            std::vector<int> s;
            for (double x = -40.0; x <= 40.0; x += 5.0) s.push_back(g.nearest_point({x}));
            return s;
        };
        const auto a = check_weighted_integrals(coarse, 0.5, lambda2, coarse.x0(), samples(coarse));
        const auto b = check_weighted_integrals(fine, 0.5, lambda2, fine.x0(), samples(fine));
        EXPECT_FALSE(a.divergent);
        EXPECT_FALSE(b.divergent);
        EXPECT_TRUE(std::isfinite(a.sup_I));
        EXPECT_LT(std::abs(a.sup_I - b.sup_I), 0.1 * b.sup_I);
        EXPECT_NEAR(a.tail_exponent, 1.0 - 0.5 - lambda2, 0.1);
        EXPECT_EQ(a.sup_normalized.has_value(), lambda2 > 1.0);
        if (lambda2 > 1.0) {
            EXPECT_LT(std::abs(*a.sup_normalized - *b.sup_normalized), 0.1 * *b.sup_normalized);
        }
    }
}

TEST(WeightedIntegrals, SlowTailFlaggedDivergent) {
    double prev = 0.0;
    for (double R : {50.0, 100.0, 200.0}) {
        const auto g = build_lattice_space(1, R, static_cast<int>(10 * R) + 1);
        const auto rep = check_weighted_integrals(g, 0.5, 0.4, g.x0(), {g.x0()});
        EXPECT_TRUE(rep.divergent);
        // continuum value 0.1, approached from above on [R/10, R]
        EXPECT_GT(rep.tail_exponent, 0.05);
        EXPECT_GT(rep.sup_I, prev);
        prev = rep.sup_I;
    }
}

TEST(WeightedIntegrals, Errors) {
    const auto g = build_lattice_space(1, 10.0, 101);
    EXPECT_THROW(check_weighted_integrals(g, 1.0, 1.0, g.x0(), {0}), std::invalid_argument);
    EXPECT_THROW(check_weighted_integrals(g, 0.5, 0.0, g.x0(), {0}), std::invalid_argument);
    EXPECT_THROW(check_weighted_integrals(g, 0.5, 1.0, g.x0(), {}), std::invalid_argument);
}

TEST(SingularSum, BallIntegralOracle) {
    // int over |y| <= R of |y|^-lambda in the plane = 2 pi R^(2-lambda) / (2-lambda)
    const auto g = build_lattice_space(2, 6.0, 121).with_alpha_hint(2.0);
    const double R = 5.0;
    for (double lambda : {0.5, 1.0, 1.5}) {
        GridFunction h(g.size());
        for (int i = 0; i < g.size(); ++i) h[i] = g.dist(i, g.x0()) <= R ? 1.0 : 0.0;
        const double exact = 2.0 * kPi * std::pow(R, 2.0 - lambda) / (2.0 - lambda);
        EXPECT_NEAR(singular_sum(g, g.x0(), lambda, h), exact, 0.02 * exact) << lambda;
    }
    EXPECT_THROW(singular_sum(g, 0, 2.0, GridFunction::Ones(g.size())), std::invalid_argument);
}

TEST(MomentBound, GaussProfileLinearInTime) {
    const auto g = build_lattice_space(1, 50.0, 2001);
    const double C = 1.0 / std::sqrt(4.0 * kPi);
    const auto rep = check_moment_bound(g, Profile::gauss(C, 0.25, 2.0), 1.0, 2.0, 1.0, logspace(0.05, 5.0, 9));
    EXPECT_TRUE(rep.bounded);
    EXPECT_LT(rep.spread, 1.05);
    for (double r : rep.ratios) EXPECT_NEAR(r, 4.0 * C, 0.05 * 4.0 * C);
}

TEST(MomentBound, Preconditions) {
    const auto g = build_lattice_space(1, 10.0, 101);
    const auto gauss = Profile::gauss(1.0, 0.25, 2.0);
    EXPECT_THROW(check_moment_bound(g, gauss, 1.0, 2.0, 0.0, {1.0}), std::invalid_argument);
    EXPECT_THROW(check_moment_bound(g, gauss, 1.0, 2.0, 1.5, {1.0}), std::invalid_argument);
    // gamma = alpha + lambda + 0.5 = 1.8 < alpha + 1
    EXPECT_THROW(check_moment_bound(g, Profile::cauchy(1.0, 1.8), 1.0, 2.0, 0.3, {1.0}), std::invalid_argument);
    EXPECT_THROW(check_moment_bound(g, gauss, 1.0, 2.0, 1.0, {}), std::invalid_argument);
}

TEST(HolderEstimateTest, SquareRootProfile) {
    const auto g = build_lattice_space(1, 2.0, 401);
    GridFunction u(g.size());
    for (int i = 0; i < g.size(); ++i) u[i] = std::sqrt(std::abs(g.coords()(i, 0)));
    HolderParams hp;
    const auto est = holder_estimate(u, g, hp);
    EXPECT_NEAR(est.theta_hat, 0.5, 0.05);
    // the reported pair satisfies the bound on every sampled pair
    for (int i = 0; i < g.size(); ++i)
        for (int j = i + 1; j < g.size(); ++j) {
            const double d = g.dist(i, j);
            if (d <= 1.0) EXPECT_LE(std::abs(u[i] - u[j]), est.C_hat * std::pow(d, est.theta_hat) * (1.0 + 1e-12));
        }
}

TEST(HolderEstimateTest, ConstantAndLinearFields) {
    const auto g = build_lattice_space(1, 2.0, 201);
    HolderParams hp;
    const auto c = holder_estimate(GridFunction::Constant(g.size(), 3.0), g, hp);
    EXPECT_EQ(c.theta_hat, 1.0);
    EXPECT_NEAR(c.C_hat, 0.0, 1e-12);
    GridFunction lin(g.size());
    for (int i = 0; i < g.size(); ++i) lin[i] = 2.0 * g.coords()(i, 0);
    const auto l = holder_estimate(lin, g, hp);
    EXPECT_NEAR(l.theta_hat, 1.0, 0.05);
    EXPECT_NEAR(l.C_hat, 2.0, 1e-9);
    EXPECT_TRUE(l.pass);
}

TEST(HolderEstimateTest, TooFewPairs) {
    const auto g = build_lattice_space(1, 2.0, 9);
    EXPECT_THROW(holder_estimate(GridFunction::Zero(g.size()), g, HolderParams{}), std::invalid_argument);
}

TEST(HolderParamsTest, ExponentInequalitiesProperty) {
    std::mt19937_64 rng(41);
    // theta <= sigma/nu needs theta1 (nu - 1) <= nu beta, guaranteed for beta >= 1
    std::uniform_real_distribution<double> unit(0.01, 1.0), nu(1.0, 4.0), beta(1.0, 4.0);
    for (int i = 0; i < 1000; ++i) {
        HolderParams hp{unit(rng), unit(rng), unit(rng), nu(rng), 1.0, beta(rng)};
        const double th = hp.theta();
        EXPECT_GT(th, 0.0);
        EXPECT_LE(th, hp.theta1);
        EXPECT_LE(th, hp.sigma / hp.nu * (1.0 + 1e-12));
        EXPECT_LE(hp.sigma / hp.nu, hp.sigma * (hp.theta2 + hp.beta) / (hp.theta2 + hp.nu * hp.beta) * (1.0 + 1e-12));
    }
    const HolderParams small_beta{1.0, 1.0, 1.0, 4.0, 1.0, 0.2};
    EXPECT_GT(small_beta.theta(), small_beta.sigma / small_beta.nu);
    EXPECT_THROW((HolderParams{0.0, 1.0, 1.0, 1.0, 1.0, 2.0}.theta()), std::invalid_argument);
    EXPECT_THROW((HolderParams{1.0, 1.0, 1.5, 1.0, 1.0, 2.0}.theta()), std::invalid_argument);
}

TEST(EnvelopeCheck, InsideAndOutside) {
    const auto g = build_lattice_space(1, 10.0, 101);
    const double eps = 0.2;
    Trajectory tr;
    for (double t : {0.0, 1.0}) {
        GridFunction v(g.size());
        for (int i = 0; i < g.size(); ++i) v[i] = 0.5 * eps / (1.0 + g.dist(i, g.x0()));
        tr.times.push_back(t);
        tr.values.push_back(v);
    }
    const auto ok = envelope_check(tr, eps, 2.0, 1.0, g.x0(), g);
    EXPECT_TRUE(ok.pass);
    EXPECT_NEAR(ok.worst_margin, 0.5 * eps / 11.0, 1e-15);
    tr.values[1][30] = eps;
    const auto bad = envelope_check(tr, eps, 2.0, 1.0, g.x0(), g);
    EXPECT_FALSE(bad.pass);
    EXPECT_EQ(bad.worst_node, 1u);
    EXPECT_EQ(bad.worst_point, 30);
    tr.values[1][30] = -1e-3;
    const auto neg = envelope_check(tr, eps, 2.0, 1.0, g.x0(), g);
    EXPECT_TRUE(neg.negative_value);
    EXPECT_FALSE(neg.pass);
    EXPECT_THROW(envelope_check(tr, eps, 1.0, 2.0, g.x0(), g), std::invalid_argument);
}

TEST(ContractionFeasibility, Examples) {
    const auto a = contraction_feasibility(1.0, 1.0, 2.0);
    EXPECT_TRUE(a.feasible);
    EXPECT_NEAR(a.epsilon_star, 0.45, 1e-15);
    EXPECT_NEAR(a.delta_max, 0.2475, 1e-15);
    const auto b = contraction_feasibility(1e3, 1e3, 2.0);
    EXPECT_TRUE(b.feasible);
    EXPECT_NEAR(b.epsilon_star, 4.5e-4, 1e-18);
    EXPECT_NEAR(b.delta_max, 2.475e-7, 1e-18);
    EXPECT_THROW(contraction_feasibility(1.0, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(contraction_feasibility(0.0, 1.0, 2.0), std::invalid_argument);
}

TEST(SmallData, MeasuredConstantsAreConsistent) {
    const auto g = build_lattice_space(2, 5.0, 21);
    HeatSemigroup sg(HeatKernel::cauchy_poisson(2), g);
    const auto c = measure_small_data_constants(sg, TimeGrid::uniform(10.0, 21), 3.0, 3.0);
    EXPECT_GE(c.A, 1.0);  // t = 0 term: weight * g = (1 + d) / (1 + d^3) at d = 0
    EXPECT_GE(c.B, c.B_green);
    EXPECT_GE(c.D, c.D_green);
    EXPECT_GE(c.C3, c.C3_green);
    EXPECT_EQ(c.C1, std::max(c.A + c.B, c.D));
    EXPECT_TRUE(std::isfinite(c.C1) && std::isfinite(c.C3));
    EXPECT_TRUE(contraction_feasibility(c.C1, c.C3, 3.0).feasible);
    EXPECT_THROW(measure_small_data_constants(sg, TimeGrid::from_nodes({0.0, 1.0, 3.0}), 3.0, 3.0),
                 std::invalid_argument);
    EXPECT_THROW(measure_small_data_constants(sg, TimeGrid::uniform(1.0, 3), 3.0, 1.5), std::invalid_argument);
    HeatSemigroup gw(HeatKernel::gauss_weierstrass(2), g);
    EXPECT_THROW(measure_small_data_constants(gw, TimeGrid::uniform(1.0, 3), 3.0, 3.0), std::invalid_argument);
}
