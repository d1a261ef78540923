#include "tskam/tfseries.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tskam;

namespace {

const cplx I1(0, 1);

double norm1(const TFSeries& f) { return weighted_norm(f, 0.0, 1.0, 1.0); }

DivisorSpec golden_divisor(int K) {
    DivisorSpec d;
    d.omega1 = {1.0};
    d.omega2 = {(std::sqrt(5.0) - 1) / 2};
    d.nu = {cplx(1.0, 0.0)};
    d.K = K;
    d.lattice = Lattice{{false, false}};
    d.alpha1 = d.alpha2 = 1e-3;
    return d;
}

}  // namespace

TEST(TFSeriesNorm, SingleMonomial) {
    TFSeries f(2, 1);
    const cplx c(2.0, -1.0);
    f.add(f.make({1, -2}, {1}, {0}), c);
    const double s = 0.3, eps = 0.7;
    EXPECT_NEAR(weighted_norm(f, s, eps), std::abs(c) * std::exp(3 * s) * eps, 1e-14);
}

TEST(TFSeriesNorm, EmptyIsZero) { EXPECT_EQ(weighted_norm(TFSeries(2, 1), 0.5, 0.5), 0.0); }

TEST(TFSeriesNorm, AdditiveOnDisjointSupport) {
    TFSeries f(2, 1), g(2, 1);
    f.add(f.make({1, 0}, {0}, {1}), 0.5);
    f.add(f.make({0, 2}, {2}, {0}), cplx(0, 0.25));
    g.add(g.make({-1, 1}, {1}, {1}), 1.5);
    EXPECT_NEAR(weighted_norm(f + g, 0.4, 0.6), weighted_norm(f, 0.4, 0.6) + weighted_norm(g, 0.4, 0.6), 1e-14);
}

TEST(TFSeriesTruncate, IdentityWhenKCoversSupport) {
    std::mt19937_64 rng(1);
    const TFSeries f = random_series(2, 1, 20, 3, 2, 1, rng);
    EXPECT_EQ(truncate_K(f, 6).terms(), f.terms());
}

TEST(TFSeriesTruncate, KZeroOnMeanFreeIsEmpty) {
    TFSeries f(2, 1);
    f.add(f.make({1, 0}, {0}, {0}), 1.0);
    f.add(f.make({0, -3}, {1}, {2}), 2.0);
    EXPECT_TRUE(truncate_K(f, 0).empty());
}

TEST(TFSeriesTruncate, KOneKeepsExactlyLowModes) {
    std::mt19937_64 rng(2);
    const TFSeries f = random_series(2, 1, 40, 3, 2, 1, rng);
    const TFSeries t = truncate_K(f, 1);
    std::size_t expect = 0;
    for (const auto& [m, c] : f.terms())
        if (std::abs(m.k[0]) + std::abs(m.k[1]) <= 1) {
            ++expect;
            EXPECT_EQ(t.coeff(m), c);
        }
    EXPECT_EQ(t.size(), expect);
}

TEST(TFSeriesTruncate, IdempotentAndCommuting) {
    std::mt19937_64 rng(3);
    const TFSeries f = random_series(2, 1, 40, 4, 2, 1, rng);
    const Lattice L{{true, false}};
    EXPECT_EQ(truncate_K(truncate_K(f, 3), 3).terms(), truncate_K(f, 3).terms());
    EXPECT_EQ(project_L(project_L(f, L), L).terms(), project_L(f, L).terms());
    EXPECT_EQ(project_L(truncate_K(f, 3), L).terms(), truncate_K(project_L(f, L), 3).terms());
}

TEST(TFSeriesBracket, SelfBracketVanishes) {
    std::mt19937_64 rng(4);
    const TFSeries f = random_series(2, 1, 10, 2, 2, 1, rng);
    EXPECT_TRUE(poisson_bracket(f, f).empty());
}

TEST(TFSeriesBracket, CanonicalPair) {
    TFSeries p(1, 1), q(1, 1);
    p.add(p.make({0}, {1}, {0}), 1.0);
    q.add(q.make({0}, {0}, {1}), 1.0);
    const TFSeries b = poisson_bracket(p, q);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b.coeff(b.make({0}, {0}, {0})), cplx(1.0));
}

TEST(TFSeriesBracket, FourierModeAgainstLinearActions) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> kd(-5, 5);
    const std::vector<double> w{0.7, -1.3};
    for (int t = 0; t < 10; ++t) {
        const std::vector<int> k{kd(rng), kd(rng)};
        TFSeries e(2, 0), h(2, 0);
        e.add(e.make(k, {}, {}), 1.0);
        h.add(h.make({0, 0}, {}, {}, {1, 0}), w[0]);
        h.add(h.make({0, 0}, {}, {}, {0, 1}), w[1]);
        const TFSeries b = poisson_bracket(e, h);
        const cplx want = -I1 * (k[0] * w[0] + k[1] * w[1]);
        if (k[0] == 0 && k[1] == 0) {
            EXPECT_TRUE(b.empty());
            continue;
        }
        ASSERT_EQ(b.size(), 1u);
        EXPECT_NEAR(std::abs(b.coeff(b.make(k, {}, {})) - want), 0.0, 1e-14);
    }
}

TEST(TFSeriesBracket, AntisymmetryAndJacobi) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 5; ++t) {
        const TFSeries f = random_series(2, 1, 5, 2, 2, 1, rng);
        const TFSeries g = random_series(2, 1, 5, 2, 2, 1, rng);
        const TFSeries h = random_series(2, 1, 5, 2, 2, 1, rng);
        EXPECT_EQ(norm1(poisson_bracket(f, g) + poisson_bracket(g, f)), 0.0);
        const TFSeries jac = poisson_bracket(f, poisson_bracket(g, h)) + poisson_bracket(g, poisson_bracket(h, f)) +
                             poisson_bracket(h, poisson_bracket(f, g));
        const double scale = norm1(f) * norm1(g) * norm1(h);
        EXPECT_LT(norm1(jac), 1e-12 * scale);
    }
}

TEST(TFSeriesBracket, NormEstimateWithMeasuredConstant) {
    std::mt19937_64 rng(7);
    const double measured = empirical_bracket_constant(2, 1, 200, rng);
    EXPECT_GT(measured, 0.0);
    EXPECT_LE(measured, bracket_constant_bound(2, 1));
}

TEST(TFSeriesHomological, NormalFormInputGivesZeroGenerator) {
    TFSeries f(2, 1);
    f.add(f.make({0, 0}, {1}, {1}), 0.3);
    f.add(f.make({0, 0}, {0}, {0}, {1, 0}), 0.2);
    EXPECT_TRUE(solve_homological(f, golden_divisor(6)).empty());
}

TEST(TFSeriesHomological, SingleModeClosedForm) {
    DivisorSpec d = golden_divisor(6);
    TFSeries f(2, 1);
    const cplx c(0.4, -0.1);
    const std::vector<int> k{2, -3};
    f.add(f.make(k, {0}, {0}), c);
    const TFSeries phi = solve_homological(f, d);
    const double wk = k[0] * d.omega1[0] + k[1] * d.omega2[0];
    EXPECT_NEAR(std::abs(phi.coeff(phi.make(k, {0}, {0})) - c / (I1 * wk)), 0.0, 1e-14);
    const TFSeries h = linear_hamiltonian(d, 1);
    const TFSeries res = poisson_bracket(phi, h) + f - normal_form_part(truncate_K(f, d.K), d.lattice);
    EXPECT_LT(norm1(res), 1e-14);
}

TEST(TFSeriesHomological, HyperbolicDivisorBoundedByNu) {
    DivisorSpec d = golden_divisor(6);
    TFSeries f(2, 1);
    for (int k3 : {1, 2, -1})
        for (int k1 = -3; k1 <= 3; ++k1) {
            const Monomial m = f.make({k1, 1}, {std::max(k3, 0)}, {std::max(-k3, 0)});
            EXPECT_GE(std::abs(d.divisor(m)), std::abs(k3) * 1.0 - 1e-15);
        }
}

TEST(TFSeriesHomological, ResonanceNamesMode) {
    DivisorSpec d;
    d.omega1 = {1.0};
    d.omega2 = {1.0};
    d.nu = {cplx(0.0)};
    d.K = 4;
    d.lattice = Lattice{{false, false}};
    d.alpha1 = d.alpha2 = 1e-6;
    TFSeries f(2, 1);
    f.add(f.make({1, -1}, {0}, {0}), 1.0);
    try {
        solve_homological(f, d);
        FAIL() << "expected a resonance error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), Error::Kind::Resonance);
        EXPECT_NE(std::string(e.what()).find("k=(1,-1)"), std::string::npos);
    }
}

// the linear equation is solved exactly; what survives the Lie series is quadratic in f
TEST(TFSeriesHomological, ResidualIsExactAtFirstOrderAndQuadraticAfter) {
    DivisorSpec d = golden_divisor(8);
    const NonresonanceReport nr = check_nonresonance(d, 8);
    d.alpha1 = d.alpha2 = 0.99 * std::min(nr.min_fast, nr.min_slow);
    TruncationWindow w;
    w.jet_degree = 2;
    w.max_degree = 4;
    std::mt19937_64 rng(8);
    TFSeries f0 = random_series(2, 1, 30, 6, 1, 1, rng, 0.5);
    f0.set_window(w);
    const TFSeries h = linear_hamiltonian(d, 1, w, {0.0, 0.0});
    double prev = 0;
    for (double scale : {1e-4, 2e-4}) {
        const TFSeries f = f0 * cplx(scale / norm1(f0));
        const TFSeries phi = solve_homological(f, d);
        const TFSeries lin = poisson_bracket(phi, h) + truncate_K(f, d.K) - normal_form_part(truncate_K(f, d.K), d.lattice);
        EXPECT_LT(norm1(lin), 1e-10 * norm1(f));
        const TFSeries H1 = lie_transform(phi, h + f, 4);
        const double r = norm1(non_normal_part(truncate_K(H1 - h - f + non_normal_part(truncate_K(f, d.K), d.lattice), d.K),
                                               d.lattice));
        if (prev > 0) EXPECT_NEAR(r / prev, 4.0, 0.2);
        prev = r;
    }
}

TEST(TFSeriesLie, ZeroGeneratorIsIdentity) {
    std::mt19937_64 rng(9);
    const TFSeries f = random_series(2, 1, 10, 2, 2, 1, rng);
    EXPECT_EQ(lie_transform(TFSeries(2, 1, f.window()), f, 3).terms(), f.terms());
}

// (1 - L + L^2/2)(1 + L + L^2/2) = 1 + L^4/4: the defect is quartic in the generator
TEST(TFSeriesLie, TruncatedInverseDefectIsQuartic) {
    std::mt19937_64 rng(10);
    TruncationWindow w;
    w.jet_degree = 3;
    w.max_degree = 6;
    TFSeries f = random_series(2, 1, 6, 2, 1, 1, rng), p0 = random_series(2, 1, 6, 2, 1, 1, rng);
    f.set_window(w);
    p0.set_window(w);
    double prev = 0;
    for (double t : {1e-2, 2e-2}) {
        const TFSeries phi = p0 * cplx(t / norm1(p0));
        const TFSeries back = lie_transform(phi * cplx(-1.0), lie_transform(phi, f, 2), 2);
        const double r = norm1(back - f);
        if (prev > 0) EXPECT_NEAR(r / prev, 16.0, 0.5);
        prev = r;
    }
}

TEST(TFSeriesLie, SecondTermForLinearH) {
    DivisorSpec d = golden_divisor(6);
    const TFSeries h = linear_hamiltonian(d, 1);
    TFSeries phi(2, 1);
    const std::vector<int> k{1, 2};
    phi.add(phi.make(k, {0}, {0}), 0.1);
    // {phi, h} = -i (w.k) phi; {phi, {phi, h}} = 0 since both are functions of the angles only
    const TFSeries out = lie_transform(phi, h, 3);
    const double wk = d.omega1[0] + 2 * d.omega2[0];
    EXPECT_NEAR(std::abs(out.coeff(out.make(k, {0}, {0})) - (-I1 * wk * 0.1)), 0.0, 1e-15);
    EXPECT_EQ(out.size(), h.size() + 1);
}

TEST(TFSeriesNonresonance, GoldenMeanScan) {
    const NonresonanceReport r = check_nonresonance(golden_divisor(5), 5);
    EXPECT_TRUE(r.pass);
    EXPECT_GT(r.min_fast, 0.0);
    EXPECT_GT(r.min_slow, 0.0);
}

TEST(TFSeriesNonresonance, RationalDependenceFails) {
    DivisorSpec d = golden_divisor(5);
    d.omega2 = {1.0};
    d.nu = {cplx(0.0)};
    const NonresonanceReport r = check_nonresonance(d, 5);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.min_fast, 0.0);
}

TEST(TFSeriesSerialize, RoundTripIsExactAndOrdered) {
    std::mt19937_64 rng(11);
    const TFSeries f = random_series(2, 1, 15, 3, 2, 1, rng);
    const std::string a = to_json(f);
    const TFSeries g = series_from_json(a);
    EXPECT_EQ(g.terms(), f.terms());
    EXPECT_EQ(to_json(g), a);
}
