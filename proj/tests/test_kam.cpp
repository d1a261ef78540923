#include "tskam/kam.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace tskam;

namespace {

double d(const kreal& x) { return static_cast<double>(x); }

KamInput admissible(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_admissible(rng);
}

}  // namespace

TEST(Constants, ExactValues) {
    EXPECT_EQ(constants(3, 4.0).c_hat, kreal(169869312));
    EXPECT_EQ(constants(1, 2.0).c_hat, kreal(147456));
    for (int n : {1, 2, 5})
        for (double tau : {1.5, 4.0, 7.25}) EXPECT_EQ(constants(n, tau).c_tilde, kreal(64));
}

TEST(Recursion, LogPlusClamp) {
    EXPECT_EQ(log_plus(kreal(0.5)), kreal(1));
    EXPECT_EQ(log_plus(kreal(std::exp(1.0))), kreal(1));
    EXPECT_NEAR(d(log_plus(kreal(100))), std::log(100.0), 1e-15);

    // E L M^2 / gamma1^2 = 1/2: the argument 2 is below e, so K = 32/s
    KamInput in;
    in.M = in.M_hat = in.M_bar = 1;
    in.gamma1 = 0.1;
    in.E = 0.5 * in.gamma1 * in.gamma1;
    in.s = 0.25;
    const KamState st = initial_state(in);
    EXPECT_EQ(st.K, kreal(32) / kreal(0.25));
}

TEST(Recursion, DerivedQuantitiesMatchClosedForms) {
    const KamInput in = admissible(21);
    const KamState st = initial_state(in);
    const double L = std::max({in.M_bar, 1 / in.M, 1 / in.M_hat});
    const double K = 32 / in.s * std::max(1.0, std::log(in.gamma1 * in.gamma1 / (in.E * L * in.M * in.M)));
    EXPECT_NEAR(d(st.K) / K, 1, 1e-12);
    const double Kt1 = std::pow(K, in.tau + 1);
    const double rh = std::min({in.gamma1 / (2 * in.M * Kt1), in.gamma2 / (2 * in.M_hat * Kt1),
                                in.lambda / (2 * in.M * K), in.lambda / (2 * in.M_hat * K), in.rho});
    EXPECT_NEAR(d(st.rho_hat) / rh, 1, 1e-12);
    const double rt = std::min(rh, in.eps * in.eps / in.s);
    EXPECT_NEAR(d(st.rho_tilde) / rt, 1, 1e-12);
    EXPECT_NEAR(d(st.E_hat) / (in.E * L / (rh * rt)), 1, 1e-12);
    EXPECT_NEAR(d(st.E_tilde) / (in.E / (in.lambda * in.eps * in.eps)), 1, 1e-12);
    EXPECT_NEAR(d(st.alpha1) / (in.gamma1 / (2 * std::pow(K, in.tau))), 1, 1e-12);
}

TEST(Recursion, HalvingChains) {
    KamInput in = admissible(22);
    in.s = 0.5;
    in.eps_bar = std::min(in.eps_bar, in.eps);
    const RunResult r = run(in, 6);
    ASSERT_EQ(r.states.size(), 7u);
    for (const auto& st : r.states) {
        EXPECT_EQ(st.s, kreal(0.5) / pow(kreal(4), st.j));
        EXPECT_EQ(st.M, kreal(in.M) * pow(kreal(2), st.j));
    }
}

TEST(Recursion, SuperConvergenceOnAdmissibleDraws) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
        const KamInput in = sample_admissible(rng);
        ASSERT_TRUE(check_conditions(in).pass());
        const RunResult r = run(in, 8);
        EXPECT_TRUE(r.verdict) << (r.failures.empty() ? "" : r.failures.front());
        ASSERT_EQ(r.states.size(), 9u);
        const kreal ratio = 2 * pow(kreal(8), kreal(in.tau) + 1);
        for (std::size_t j = 1; j < r.states.size(); ++j) {
            const KamState &a = r.states[j - 1], &b = r.states[j];
            EXPECT_LT(b.E_hat, a.E_hat * a.E_hat);
            EXPECT_GE(b.lambda, r.states[0].lambda / 2);
            EXPECT_LT(b.K, 8 * a.K);
            EXPECT_GE(b.rho_hat, a.rho_hat / ratio);
            EXPECT_GE(b.rho_tilde, a.rho_tilde / ratio);
        }
    }
}

TEST(Recursion, FirstStepSquares) {
    const KamInput in = admissible(24);
    const RunResult r = run(in, 1);
    ASSERT_EQ(r.states.size(), 2u);
    EXPECT_LT(r.states[1].E_hat, r.states[0].E_hat * r.states[0].E_hat);
}

TEST(Recursion, InflatedEIsCaught) {
    KamInput in = admissible(25);
    in.E = 1e-2;
    const RunResult r = run(in, 8);
    EXPECT_FALSE(r.verdict);
    EXPECT_FALSE(r.failures.empty());
}

TEST(Recursion, BitwiseReproducible) {
    const KamInput in = admissible(26);
    const RunResult a = run(in, 8), b = run(in, 8);
    ASSERT_EQ(a.states.size(), b.states.size());
    for (std::size_t j = 0; j < a.states.size(); ++j) {
        EXPECT_EQ(a.states[j].E, b.states[j].E);
        EXPECT_EQ(a.states[j].rho_hat, b.states[j].rho_hat);
    }
    EXPECT_EQ(kam_csv(a), kam_csv(b));
    EXPECT_EQ(kam_csv(a).substr(0, 24), "j,K,rho_hat,E_hat,lambda");
}

TEST(Conditions, PerturbativeLimit) {
    KamInput in = admissible(27);
    in.E *= 1e-12;
    EXPECT_TRUE(check_conditions(in).pass());
}

TEST(Conditions, KamHatThresholdIsStrict) {
    KamInput in = admissible(28);
    // bisect log E for c_hat E_hat = 1; the upper end of the bracket fails
    double lo = std::log(in.E), hi = std::log(in.E) + 200;
    ASSERT_GE(d(check_conditions([&] { KamInput t = in; t.E = std::exp(hi); return t; }()).c_hat_E_hat), 1.0);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        KamInput t = in;
        t.E = std::exp(mid);
        (check_conditions(t).c_hat_E_hat < 1 ? lo : hi) = mid;
    }
    KamInput t = in;
    t.E = std::exp(hi);
    const ConditionReport r = check_conditions(t);
    EXPECT_GE(r.c_hat_E_hat, kreal(1));
    EXPECT_FALSE(r.kam_hat);
}

TEST(Conditions, StructuralFailuresNamed) {
    KamInput in = admissible(29);
    in.tau = in.n();
    EXPECT_FALSE(check_conditions(in).tau_ok);
    in = admissible(29);
    in.gamma2 = 2 * in.gamma1;
    const ConditionReport r = check_conditions(in);
    EXPECT_FALSE(r.gammas_ok);
    EXPECT_NE(r.failures().find("gamma1 >= gamma2"), std::string::npos);
}

TEST(Conditions, AveragingSmallness) {
    const AveragingSmallness a = check_averaging_smallness(28, 0.2, 0.2, 1.0, 0.05, 1.0, 1e-9, 1e-3);
    EXPECT_DOUBLE_EQ(a.sigma_hat, 0.2);
    EXPECT_DOUBLE_EQ(a.delta, std::min(0.05 * 0.2, 0.04));
    EXPECT_TRUE(a.k_sigma_ok);
    EXPECT_NEAR(a.smallness, 8 * 28 * 0.2 * 1e-9 / (1e-3 * 0.01), 1e-15);
    EXPECT_TRUE(a.pass());
    EXPECT_FALSE(check_averaging_smallness(20, 0.2, 0.2, 1.0, 0.05, 1.0, 1e-9, 1e-3).k_sigma_ok);
}

TEST(Diophantine, IrrationalPassesRationalFails) {
    const DiophantineReport ok = diophantine_check({1.0, std::sqrt(2.0)}, {std::sqrt(3.0)}, 1e-3, 1e-3, 4.0, 20);
    EXPECT_TRUE(ok.pass);
    // omega2 resonant within itself: k2 = (2, -1) m
    const double r5 = std::sqrt(5.0);
    const DiophantineReport bad = diophantine_check({1.0, std::sqrt(2.0)}, {r5, 2 * r5}, 1e-3, 1e-3, 4.0, 10);
    EXPECT_FALSE(bad.pass);
    EXPECT_FALSE(bad.failing_k.empty());
    EXPECT_LT(bad.worst_margin2, 1e-12);
    ASSERT_EQ(bad.worst_k2.size(), 4u);
    EXPECT_EQ(bad.worst_k2[0], 0);
    EXPECT_EQ(bad.worst_k2[1], 0);
    EXPECT_EQ(bad.worst_k2[2], -2 * bad.worst_k2[3]);
}

TEST(Diophantine, EqualGammasIsSingleScale) {
    const std::vector<double> w = {1.0, std::sqrt(2.0), std::sqrt(3.0)};
    const double g = 1e-2, tau = 3.5;
    const int Kmax = 12;
    double worst = std::numeric_limits<double>::infinity();
    for (int a = -Kmax; a <= Kmax; ++a)
        for (int b = -Kmax; b <= Kmax; ++b)
            for (int c = -Kmax; c <= Kmax; ++c) {
                const int nk = std::abs(a) + std::abs(b) + std::abs(c);
                if (nk == 0 || nk > Kmax) continue;
                worst = std::min(worst, std::abs(a * w[0] + b * w[1] + c * w[2]) * std::pow(nk, tau) / g);
            }
    const DiophantineReport r = diophantine_check({w[0], w[1]}, {w[2]}, g, g, tau, Kmax);
    EXPECT_NEAR(std::min(r.worst_margin1, r.worst_margin2), worst, 1e-12 * worst);
    EXPECT_EQ(r.pass, worst >= 1);
}

TEST(Thresholds, ClosedForms) {
    EXPECT_NEAR(c_n(3, 1e-6), std::pow(1 + std::pow(1 + 256 * 3 * 1e-6, 6), 2), 1e-13);
    const ThresholdReport t = thresholds_and_measures(0.1, 4, 1e-6, 1.0, 0.1, 3, 1e-6, Calibration{});
    EXPECT_DOUBLE_EQ(t.defect_exponent_stable, 2.5);
    EXPECT_DOUBLE_EQ(t.sigma, 0.5);
    for (int s = 4; s <= 8; ++s) EXPECT_GE(thresholds_and_measures(0.1, s, 1e-6, 1, 0.1, 3, 1e-6, {}).sigma, 0.5);
    EXPECT_NEAR(t.a_threshold, 1e-4, 1e-18);
    EXPECT_NEAR(t.measure_hyper, 1 - 1e-3, 1e-15);
}
