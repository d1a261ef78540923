#include "tskam/averaging.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tskam;

namespace {

MassParams masses(double mu = 1e-3) {
    MassParams mp = DomainSpec{}.masses;
    mp.mu = mu;
    return mp;
}

}  // namespace

TEST(Average, ConstantsAndModes) {
    EXPECT_NEAR(average_fast_angles([](double, double) { return 2.5; }, 16), 2.5, 1e-15);
    EXPECT_NEAR(average_fast_angles([](double a, double) { return std::cos(a); }, 16), 0.0, 1e-15);
    for (int k1 = -4; k1 <= 4; ++k1)
        for (int k2 = -4; k2 <= 4; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const double v = average_fast_angles(
                [&](double a, double b) { return 1.7 * std::cos(k1 * a + k2 * b + 0.3); }, 10);
            EXPECT_LT(std::abs(v), 1e-12) << k1 << "," << k2;
        }
}

TEST(Average, SpectralConvergence) {
    const MassParams mp = masses();
    const PeriheliaCoords p = perihelia_point(3.0, 1.5, 1.2, 0.05, 0.1, 1.0);
    QuadratureConfig q;
    std::vector<double> v;
    for (int N : {16, 32, 64, 128}) {
        q.N = N;
        v.push_back(average_fast_angles(p, mp, q));
    }
    const double d1 = std::abs(v[1] - v[0]), d2 = std::abs(v[2] - v[1]), d3 = std::abs(v[3] - v[2]);
    EXPECT_LT(d3, 1e-10 * std::abs(v[3]));
    // geometric, not algebraic, decay in N
    EXPECT_LT(d2, 1e-2 * d1);
    EXPECT_LE(d3, d2);
}

TEST(Average, WidelySeparatedCircularLeadingTerm) {
    const MassParams mp = masses();
    // a1 = (L1/m1)^2 / M1, a2 = (L2/m2)^2 / M2
    // z = 0: circular, coplanar, G = L1 - L2
    const double L1 = 4.0, L2 = 3.0;
    const RpsCoords r{L1, L2, 0, 0, 0, (L1 - L2) * std::cos(0.4), 0.3, 1.1, 0, 0, 0, 0.2};
    QuadratureConfig q;
    const double fav = average_fast_angles(r, mp, q);
    const double a1 = a_from_lambda(1, L1, mp), a2 = a_from_lambda(2, L2, mp);
    const double alpha = a1 / a2;
    const double lead = -mp.m1 * mp.m2 / a2;
    EXPECT_LT(alpha, 0.02);
    EXPECT_NEAR(fav / lead - 1, 0.0, 2 * alpha * alpha);
}

TEST(Quadrupole, MatchesClosedFormAndIsStable) {
    const MassParams mp = masses(0.0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 3; ++i) {
        const PeriheliaCoords p = perihelia_point(3.0, 1.5, 1.2, 0.3 * (u(rng) - 0.5), 0.6 * (u(rng) - 0.5), 1.0);
        const CartesianState s = cartesian_from_perihelia(p, mp);
        const KeplerOrbit o1 = kepler_orbit(s.y1, s.x1, mp.mred(1), mp.Mred(1));
        const KeplerOrbit o2 = kepler_orbit(s.y2, s.x2, mp.mred(2), mp.Mred(2));
        QuadratureConfig q;
        const QuadrupoleReport r = quadrupole_P(o1, o2, q);
        EXPECT_LT(r.residual, 1e-6);
        EXPECT_NEAR(r.P / quadrupole_closed_form(o1, o2), 1.0, 1e-6);
    }
}

TEST(Quadrupole, CoplanarRetrogradeIsStationaryAndSaddle) {
    const MassParams mp = masses(0.0);
    QuadratureConfig q;
    auto P = [&](double th, double vt) { return quadrupole_P(3.0, 1.5, 1.2, th, vt, 1.0, mp, q).P; };
    const double h = 1e-3;
    const double dth = (P(h, 0) - P(-h, 0)) / (2 * h), dvt = (P(0, h) - P(0, -h)) / (2 * h);
    const double p0 = P(0, 0);
    const double hth = (P(h, 0) - 2 * p0 + P(-h, 0)) / (h * h), hvt = (P(0, h) - 2 * p0 + P(0, -h)) / (h * h);
    const double hx = (P(h, h) - P(h, -h) - P(-h, h) + P(-h, -h)) / (4 * h * h);
    const double scale = std::max({std::abs(hth), std::abs(hvt), std::abs(hx)});
    EXPECT_LT(std::abs(dth), 1e-6 * scale);
    EXPECT_LT(std::abs(dvt), 1e-6 * scale);
    EXPECT_LT(hth * hvt - hx * hx, 0.0);
}

TEST(Equilibrium, EllipticAtZeroZ) {
    QuadratureConfig q;
    const EquilibriumReport e = elliptic_equilibrium_check(2.5, 1.5, masses(), q);
    EXPECT_TRUE(e.equilibrium);
    EXPECT_LT(e.gradient_ratio, 1e-8);
    EXPECT_EQ(e.classification, "elliptic");
    double mx = 0;
    for (auto z : e.eigenvalues) mx = std::max(mx, std::abs(z));
    for (auto z : e.eigenvalues) EXPECT_LT(std::abs(z.real()), 1e-6 * mx);
    ASSERT_EQ(e.rates.size(), 3u);
}

TEST(Equilibrium, EllipticFrequenciesShrinkWithAlpha) {
    QuadratureConfig q;
    double prev = 1e300;
    for (double L2 : {1.5, 2.0, 3.0}) {
        const EquilibriumReport e = elliptic_equilibrium_check(4.0, L2, masses(), q);
        double mx = 0;
        for (double w : e.rates) mx = std::max(mx, std::abs(w));
        EXPECT_LT(mx, prev);
        prev = mx;
    }
}

TEST(Equilibrium, HyperbolicOnN0) {
    DomainSpec spec;
    spec.masses.mu = 1e-3;
    QuadratureConfig q;
    std::mt19937_64 rng(2);
    for (int i = 0; i < 3; ++i) {
        double L1, L2, G2;
        ASSERT_TRUE(sample_Ap_physical(spec, rng, L1, L2, G2));
        const EquilibriumReport h = hyperbolic_equilibrium_check(L1, L2, G2, spec, q);
        EXPECT_LT(h.gradient_ratio, 1e-8);
        EXPECT_EQ(h.classification, "hyperbolic");
        ASSERT_EQ(h.eigenvalues.size(), 2u);
        EXPECT_NEAR(h.eigenvalues[0].real(), -h.eigenvalues[1].real(), 1e-9 * std::abs(h.eigenvalues[0]));
        EXPECT_GT(h.rate_P, 0.0);
    }
}

TEST(Equilibrium, HyperbolicRequiresAp) {
    DomainSpec spec;
    QuadratureConfig q;
    EXPECT_THROW(hyperbolic_equilibrium_check(1.2, 1.1, 1.05, spec, q), Error);
}

TEST(Equilibrium, ReportJsonHasFields) {
    QuadratureConfig q;
    const std::string j = to_json(elliptic_equilibrium_check(2.5, 1.5, masses(), q));
    for (const char* key : {"gradient_norm", "hessian", "eigenvalues", "classification", "quadrature"})
        EXPECT_NE(j.find(key), std::string::npos) << key;
}

TEST(Quadrature, Deterministic) {
    const PeriheliaCoords p = perihelia_point(3.0, 1.5, 1.2, 0.05, 0.1, 1.0);
    QuadratureConfig q;
    EXPECT_EQ(average_fast_angles(p, masses(), q), average_fast_angles(p, masses(), q));
}

TEST(Quadrature, RejectsOddOrSmallN) {
    QuadratureConfig q;
    q.N = 7;
    EXPECT_THROW(validate(q), Error);
    q.N = 6;
    EXPECT_THROW(validate(q), Error);
}
