#include "tskam/domain.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace tskam;

TEST(Domain, LambdaPlusClosedForm) {
    const double want = (13.0 + std::sqrt(185.0)) / 2.0;
    EXPECT_NEAR(lambda_plus_of_G(1.0), want, 1e-12);
    EXPECT_NEAR(lambda_plus_of_G(1.0), 13.300735254367721, 1e-12);
    EXPECT_NEAR(lambda_plus_of_G(2.5), 2.5 * want, 1e-11);
    // the point (x+, 2 x+) sits on C
    const double xp = lambda_plus_of_G(1.0);
    EXPECT_LT(std::abs(curve_C(xp) - 2 * xp), 1e-9);
}

TEST(Domain, UnderlineKClosedForm) {
    const double want = 0.25 * std::sqrt(0.3 * (69.0 + 11.0 * std::sqrt(33.0)));
    EXPECT_NEAR(underline_k(), want, 1e-12);
    EXPECT_NEAR(underline_k(), 1.5743, 1e-4);
}

TEST(Domain, TangencyCubic) {
    const TangencyCubic t = tangency_cubic();
    EXPECT_NEAR(t.roots[0], (1 - std::sqrt(33.0)) / 2, 1e-12);
    EXPECT_NEAR(t.roots[1], -1.0, 1e-12);
    EXPECT_NEAR(t.roots[2], (1 + std::sqrt(33.0)) / 2, 1e-12);
    EXPECT_NEAR(t.a, 3.3723, 1e-4);
    EXPECT_NEAR(t.b, (-17 + std::sqrt(33.0)) / 32, 1e-12);
    EXPECT_NEAR(t.b, -0.3517, 1e-4);
    EXPECT_NEAR(-t.a * t.a * t.b, 4.0, 1e-12);
    EXPECT_LT(t.residual, 1e-12);
}

TEST(Claim, BracketFormulas) {
    for (double th : {0.01, 0.05, 0.1}) {
        EXPECT_NEAR(claim_cubic(1 + 4 * th, th), th * (64 * th * th + 19 * th - 4), 1e-13);
        EXPECT_NEAR(claim_cubic(1 + 6 * th, th), th * (216 * th * th + 79 * th + 4), 1e-13);
    }
    EXPECT_LT(claim_cubic(1.2, 0.05), 0.0);
    EXPECT_GT(claim_cubic(1.3, 0.05), 0.0);
}

TEST(Claim, ValidityBound) {
    EXPECT_NEAR(theta_validity_bound(), (-19 + std::sqrt(1385.0)) / 128, 1e-14);
    EXPECT_NEAR(theta_validity_bound(), 0.1423, 1e-4);
    const double tb = theta_validity_bound();
    EXPECT_LT(tb * (64 * tb * tb + 19 * tb - 4), 1e-14);
}

TEST(Claim, XstarBracketAndDerivative) {
    const double x = xstar(0.05);
    EXPECT_GT(x, 1.2);
    EXPECT_LT(x, 1.3);
    EXPECT_LT(std::abs(claim_cubic(x, 0.05)), 1e-12);
    const double h = 1e-6;
    EXPECT_NEAR(claim_cubic_derivative(1.25, 0.05), (claim_cubic(1.25 + h, 0.05) - claim_cubic(1.25 - h, 0.05)) / (2 * h),
                1e-7);
    for (int i = 1; i <= 20; ++i) {
        const BracketReport b = xstar_bracket(0.005 * i);
        EXPECT_TRUE(b.bracket_ok && b.root_inside && b.monotone_ok) << b.theta;
    }
    EXPECT_THROW(xstar(0.0), Error);
    EXPECT_THROW(xstar(0.2), Error);
}

TEST(Sets, StrictBoundaries) {
    DomainSpec spec;
    const KPair k = k_pm(spec);
    const double L2 = (spec.Lambda_minus + spec.Lambda_plus) / 2;
    EXPECT_TRUE(in_L(0.5 * (k.minus + k.plus) * L2, L2, spec));
    EXPECT_FALSE(in_L(0.5 * (k.minus + k.plus) * spec.Lambda_minus, spec.Lambda_minus, spec));
    EXPECT_FALSE(in_Bp(spec.G / 2, 0.0, spec));
}

TEST(Sets, LpDirectSubstitution) {
    DomainSpec spec;
    // heavy outer-planet mass ratio so that (10, 2) also lies in L
    spec.masses = {1.0, 1000.0, 1.0, 0.0};
    spec.alpha_minus = 2e-6;
    spec.alpha_plus = 1e-4;
    spec.c = 0.5;
    const double t = (2 / spec.c) * std::sqrt(spec.alpha_plus), G = spec.G, L1 = 10, L2 = 2;
    EXPECT_GT(L1, G + t * L2);
    EXPECT_GT(5 * L1 * L1 * G - (G + t * L1) * (G + t * L1) * (4 * G + t * L1), 0);
    EXPECT_GT(5 * L1 * L1 * G - (G + L2) * (G + L2) * (4 * G + L2), 0);
    EXPECT_TRUE(L2 > G && L1 > 2 * G);
    EXPECT_TRUE(in_Lp(L1, L2, spec));
    EXPECT_FALSE(in_Lp(2.0 * spec.G, 0.7, spec));
}

TEST(Sets, ScaleCovariance) {
    DomainSpec spec;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 2000; ++i) {
        const double L1 = 0.5 + 25 * u(rng), L2 = 0.5 + 13 * u(rng), G2 = L2 * u(rng);
        for (double t : {0.3, 2.0, 7.5}) {
            DomainSpec s2 = spec;
            s2.G = t * spec.G;
            s2.Lambda_minus = t * spec.Lambda_minus;
            s2.Lambda_plus = t * spec.Lambda_plus;
            EXPECT_EQ(in_Lp(L1, L2, spec), in_Lp(t * L1, t * L2, s2));
            EXPECT_EQ(in_L0(L1, L2, spec), in_L0(t * L1, t * L2, s2));
            EXPECT_EQ(in_L1(L1, L2, spec), in_L1(t * L1, t * L2, s2));
        }
        (void)G2;
    }
}

TEST(Sets, A1CenterAndBoundary) {
    DomainSpec spec;
    const double L2 = 2.0, L1 = L2 + spec.G;
    const double G2 = L2 - (spec.c1 * spec.c1 * spec.eps * spec.eps + spec.gamma) / 2;
    EXPECT_TRUE(in_A1(L1, L2, G2, spec));
    EXPECT_TRUE(in_B1(0.0, 0.0, spec));
    EXPECT_FALSE(in_B1(spec.c1 * std::sqrt(spec.G) * spec.eps, 0.0, spec));
}

TEST(Inclusion, MonteCarlo) {
    DomainSpec spec;
    const InclusionReport r = verify_inclusion_X(spec, 10000, 11);
    EXPECT_EQ(r.samples, 10000u);
    EXPECT_TRUE(r.pass());
}

TEST(Inclusion, ChordDirection) {
    for (double x = 1.0; x <= 20.0; x += 0.25) {
        EXPECT_LE(1.2 * x + 0.8, curve_C(x) + 1e-15);
        if (x > 1) EXPECT_LT(1 + x, 1.2 * x + 0.8);
    }
    EXPECT_NEAR(curve_C(1.0), 2.0, 1e-15);
}

TEST(Inclusion, RejectsBadHypotheses) {
    DomainSpec spec;
    spec.alpha_plus = 0.3;
    EXPECT_FALSE(check_inclusion_hypotheses(spec).all());
    EXPECT_THROW(verify_inclusion_X(spec, 100, 1), Error);
}

TEST(Smallness, ZBoundedByEps) {
    DomainSpec spec;
    const ZSmallnessReport z = z_smallness(spec, 1000, 12);
    EXPECT_EQ(z.samples, 1000u);
    EXPECT_GT(z.max_ratio, 0.0);
    EXPECT_LT(z.max_ratio, 10.0);
}

TEST(Smallness, ZNormIdentity) {
    // Gamma1 = G + G2 at Theta = 0
    const double L1 = 3.0, L2 = 1.5, G2 = 1.2, G = 1.0;
    EXPECT_NEAR(z_norm_sq(L1, L2, G2, 0.0, 0.0, G), 2 * (L1 - G - G2) + 2 * (L2 - G2), 1e-12);
}

TEST(Measure, ProofChainAtSmallTheta) {
    const double c = 0.95, ap = 0.05;
    const double m = 1 - (2 / c) * std::sqrt(ap);
    const double th = 0.05, ze = 0.01;
    ASSERT_LE(th, m / (6 * (1 - m)));
    const double xs = xstar(th);
    // composite Simpson on the concave F
    const int n = 2000;
    const double a = 1 + th, h = (xs - a) / n;
    double I = claim_F(a, th) + claim_F(xs, th);
    for (int i = 1; i < n; ++i) I += (i % 2 ? 4 : 2) * claim_F(a + i * h, th);
    I *= h / 3;
    EXPECT_GE(I, 0.9 * th * th);
    EXPECT_GE(I, th / 2 * (xs - 1 - th) * (xs - 1 - th) / (xs - 1));
    EXPECT_NEAR(claim_F(1.0, th), th, 1e-15);
    EXPECT_NEAR(claim_F(xs, th), 0.0, 1e-12);
    // with F2 = theta - zeta past 1 + theta
    EXPECT_GE(astar_integral(th, ze, m), (th - ze) * I * (1 - 1e-9));
}

TEST(Measure, F2PiecewiseForm) {
    const double m = 1 - (2 / 0.95) * std::sqrt(0.05), th = 0.05, ze = 0.01;
    const double xs = xstar(th);
    for (double x = 1 + ze; x < xs; x += 1e-3) {
        const double F2 = std::min({th - ze, x - 1 - ze, m * x - ze});
        EXPECT_DOUBLE_EQ(F2, x <= 1 + th ? x - 1 - ze : th - ze);
    }
}

TEST(Measure, MonteCarloChain) {
    DomainSpec spec;
    spec.alpha_plus = 0.045;
    spec.eps = 1.0;
    ASSERT_TRUE(check_inclusion_hypotheses(spec).all());
    const MeasureReport r = measure_Astar(spec, 100000, 13);
    EXPECT_GT(r.hits, 0u);
    EXPECT_TRUE(r.chain_ok()) << r.monte_carlo << " " << r.mc_sigma << " " << r.integral << " " << r.bound;
}

TEST(Figures, CsvShapeAndAnchors) {
    DomainSpec spec;
    for (int id : {1, 2}) {
        const auto rows = figure_data(spec, id, 50);
        ASSERT_FALSE(rows.empty());
        const std::string csv = plot_csv(rows);
        std::istringstream is(csv);
        std::string header;
        std::getline(is, header);
        EXPECT_EQ(header, "x,y,series");
        std::size_t lines = 0;
        for (std::string l; std::getline(is, l);) ++lines;
        EXPECT_EQ(lines, rows.size());
    }
    const auto rows = figure_data(spec, 2, 50);
    const bool has_P0 = std::any_of(rows.begin(), rows.end(), [](const PlotRow& r) {
        return std::abs(r.x - 1) < 1e-12 && std::abs(r.y - 2) < 1e-12;
    });
    EXPECT_TRUE(has_P0);
    EXPECT_THROW(figure_data(spec, 3, 50), Error);
}
