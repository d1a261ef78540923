#pragma once

// Constant ledger of the two-scale KAM step and its recursion. E_j shrinks doubly
// exponentially, so the arithmetic runs in a wide-exponent binary float.

#include "tskam/common.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace tskam {

using kreal = boost::multiprecision::cpp_bin_float_50;

struct KamInput {
    int n1 = 2, n2 = 1;
    double tau = 4.0;
    double gamma1 = 1e-1, gamma2 = 1e-2;
    double s = 0.25;
    double rho = 1e-2;
    double eps = 0.1, eps_bar = 0.1;
    double M = 1.0, M_hat = 1.0, M_bar = 1.0, M_bar1 = 1.0, M_bar2 = 1.0;
    double E = 1e-30;
    double lambda = 1e-2;

    int n() const { return n1 + n2; }
    double L() const;
};

struct KamConstants {
    kreal c_hat, c_tilde;
};
KamConstants constants(int n, double tau);

kreal log_plus(kreal a);

struct KamState {
    int j = 0;
    kreal E, M, M_hat, M_bar, L, lambda, lambda_coarse, s, rho, eps;
    // derived at this step
    kreal K, rho_hat, rho_tilde, E_hat, E_tilde, alpha1, alpha2;
};

KamState initial_state(const KamInput& in);
// fills K, rho_hat, rho_tilde, E_hat, E_tilde, alpha1, alpha2 from the primary fields
void derive(KamState& st, const KamInput& in);
// throws Error::Numerical when lambda_{j+1} <= 0
KamState step(const KamState& st, const KamInput& in);

struct ConditionReport {
    kreal E_hat = 0, E_tilde = 0, rho_hat = 0, rho_tilde = 0, K = 0;
    kreal c_hat_E_hat = 0, c_tilde_E_tilde = 0, lambda_cond = 0;
    bool tau_ok = false, gammas_ok = false, s_ok = false, positive = false;
    bool kam_hat = false, kam_tilde = false, lambda_ok = false;
    bool pass() const { return tau_ok && gammas_ok && s_ok && positive && kam_hat && kam_tilde && lambda_ok; }
    std::string failures() const;
};
ConditionReport check_conditions(const KamInput& in);

struct AveragingSmallness {
    double sigma_hat, delta, K_sigma, smallness;
    bool k_sigma_ok, smallness_ok;
    bool pass() const { return k_sigma_ok && smallness_ok; }
};
// K sigma_hat >= 8 log 2 and 2^3 c1 K sigma_hat |f| / (alpha2 delta) < 1,
// sigma_hat = min{s_hat, eps_hat/eps}, delta = min{r_hat s_hat, eps_hat^2}
AveragingSmallness check_averaging_smallness(double K, double s_hat, double eps_hat, double eps, double r_hat,
                                             double c1, double norm_f, double alpha2);

struct RunResult {
    std::vector<KamState> states;
    bool conditions_passed = false;
    bool verdict = false;
    std::vector<std::string> failures;
    kreal r = 0, r_prime = 0;  // 8 n E_hat rho_tilde and 2 E_hat eps at step 0
};
RunResult run(const KamInput& in, int J);

// Draws inputs until check_conditions passes. Deterministic in the generator state.
KamInput sample_admissible(std::mt19937_64& rng);

struct DiophantineReport {
    double worst_margin1 = 0, worst_margin2 = 0;  // min |w.k| |k|^tau / gamma
    std::vector<int> worst_k1, worst_k2;
    bool pass = true;
    std::vector<int> failing_k;
};
DiophantineReport diophantine_check(const std::vector<double>& omega1, const std::vector<double>& omega2, double gamma1,
                                    double gamma2, double tau, int Kmax);

struct Calibration {
    double C_star = 1.0, c_star = 1.0, a_star = 1.0, b = 1.0;
};
struct ThresholdReport {
    double mu_stable, measure_stable, defect_exponent_stable;
    double a_threshold, mu_hyper, measure_hyper;
    double mu_stable_relaxed, mu_hyper_relaxed;
    double sigma;
    double c_n;
};
ThresholdReport thresholds_and_measures(double eps, int s, double a, double P0_norm, double eta, int n, double E,
                                        const Calibration& cal);
// (1+(1+2^8 n E)^{2n})^2
double c_n(int n, double E);

std::string kam_csv(const RunResult& r);

}  // namespace tskam
