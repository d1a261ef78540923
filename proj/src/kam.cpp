#include "tskam/kam.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace tskam {

using std::log;
using std::pow;

double KamInput::L() const { return std::max({M_bar, 1.0 / M, 1.0 / M_hat}); }

KamConstants constants(int n, double tau) {
    return {kreal(128) * (n + 1) * pow(kreal(24), kreal(tau)), kreal(64)};
}

kreal log_plus(kreal a) { return a > 0 ? std::max(kreal(1), kreal(log(a))) : kreal(1); }

KamState initial_state(const KamInput& in) {
    KamState st{};
    st.j = 0;
    st.E = in.E;
    st.M = in.M;
    st.M_hat = in.M_hat;
    st.M_bar = in.M_bar;
    st.L = in.L();
    st.lambda = in.lambda;
    st.lambda_coarse = in.lambda;
    st.s = in.s;
    st.rho = in.rho;
    st.eps = in.eps;
    derive(st, in);
    return st;
}

void derive(KamState& st, const KamInput& in) {
    const kreal g1 = in.gamma1, g2 = in.gamma2, tau = in.tau;
    st.K = kreal(32) / st.s * log_plus(kreal(1) / (st.E * st.L * st.M * st.M / (g1 * g1)));
    const kreal Kt1 = pow(st.K, tau + 1);
    st.rho_hat = std::min({g1 / (2 * st.M * Kt1), g2 / (2 * st.M_hat * Kt1), st.lambda / (2 * st.M * st.K),
                           st.lambda / (2 * st.M_hat * st.K), st.rho});
    st.rho_tilde = std::min(st.rho_hat, st.eps * st.eps / st.s);
    st.E_hat = st.E * st.L / (st.rho_hat * st.rho_tilde);
    st.E_tilde = st.E / (st.lambda * st.eps * st.eps);
    st.alpha1 = g1 / (2 * pow(st.K, tau));
    st.alpha2 = g2 / (2 * pow(st.K, tau));
}

KamState step(const KamState& st, const KamInput& in) {
    KamState nx{};
    nx.j = st.j + 1;
    const kreal g1 = in.gamma1;
    // quadratic: the one-step bound is e^{-Ks/32} E <= (E L M^2/gamma1^2) E
    nx.E = st.E * st.E * st.L * st.M * st.M / (g1 * g1);
    nx.M = 2 * st.M;
    nx.M_bar = 2 * st.M_bar;
    nx.M_hat = 2 * st.M_hat;
    nx.L = 2 * st.L;
    nx.rho = st.rho_hat / 4;
    nx.eps = st.eps / 4;
    nx.s = st.s / 4;
    nx.lambda = st.lambda - kreal(256) * st.E / (st.eps * st.eps);
    nx.lambda_coarse = st.lambda_coarse - kreal(16) * st.E / (st.eps * st.eps);
    if (!(nx.lambda > 0))
        throw Error(Error::Kind::Numerical, "kam step " + std::to_string(nx.j) + ": hyperbolicity exhausted (lambda <= 0)");
    derive(nx, in);
    return nx;
}

std::string ConditionReport::failures() const {
    std::string out;
    if (!tau_ok) out += "tau > n; ";
    if (!gammas_ok) out += "gamma1 >= gamma2 > 0; ";
    if (!s_ok) out += "0 < s <= eps/(eps_bar+eps); ";
    if (!positive) out += "positivity; ";
    if (!kam_hat) out += "c_hat E_hat < 1; ";
    if (!kam_tilde) out += "c_tilde E_tilde < 1; ";
    if (!lambda_ok) out += "2 s^tau gamma2/(6^tau lambda) <= 1; ";
    return out;
}

ConditionReport check_conditions(const KamInput& in) {
    ConditionReport r;
    r.tau_ok = in.tau > in.n() && in.n1 >= 1 && in.n2 >= 0;
    r.gammas_ok = in.gamma1 >= in.gamma2 && in.gamma2 > 0;
    r.s_ok = in.s > 0 && in.s <= in.eps / (in.eps_bar + in.eps);
    r.positive = in.rho > 0 && in.eps > 0 && in.eps_bar >= 0 && in.M > 0 && in.M_hat > 0 && in.M_bar > 0 &&
                 in.E > 0 && in.lambda > 0;
    if (!r.positive || !r.gammas_ok) return r;
    KamState st = initial_state(in);
    auto c = constants(in.n(), in.tau);
    r.K = st.K;
    r.rho_hat = st.rho_hat;
    r.rho_tilde = st.rho_tilde;
    r.E_hat = st.E_hat;
    r.E_tilde = st.E_tilde;
    r.c_hat_E_hat = c.c_hat * st.E_hat;
    r.c_tilde_E_tilde = c.c_tilde * st.E_tilde;
    r.kam_hat = r.c_hat_E_hat < 1;
    r.kam_tilde = r.c_tilde_E_tilde < 1;
    r.lambda_cond = 2 * pow(kreal(in.s), kreal(in.tau)) * in.gamma2 / (pow(kreal(6), kreal(in.tau)) * in.lambda);
    r.lambda_ok = r.lambda_cond <= 1;
    return r;
}

AveragingSmallness check_averaging_smallness(double K, double s_hat, double eps_hat, double eps, double r_hat,
                                             double c1, double norm_f, double alpha2) {
    AveragingSmallness a{};
    a.sigma_hat = std::min(s_hat, eps_hat / eps);
    a.delta = std::min(r_hat * s_hat, eps_hat * eps_hat);
    a.K_sigma = K * a.sigma_hat;
    a.smallness = 8 * c1 * a.K_sigma * norm_f / (alpha2 * a.delta);
    a.k_sigma_ok = a.K_sigma >= 8 * std::log(2.0);
    a.smallness_ok = a.smallness < 1;
    return a;
}

RunResult run(const KamInput& in, int J) {
    RunResult res;
    auto cond = check_conditions(in);
    res.conditions_passed = cond.pass();
    if (!res.conditions_passed) res.failures.push_back("conditions: " + cond.failures());
    if (!cond.positive || !cond.gammas_ok) {
        res.verdict = false;
        return res;
    }
    const auto c = constants(in.n(), in.tau);
    const kreal ratio = 2 * pow(kreal(8), kreal(in.tau) + 1);
    KamState st = initial_state(in);
    const kreal lambda0 = st.lambda;
    res.r = 8 * in.n() * st.E_hat * st.rho_tilde;
    res.r_prime = 2 * st.E_hat * st.eps;
    res.states.push_back(st);
    auto fail = [&](int j, const std::string& m) { res.failures.push_back("step " + std::to_string(j) + ": " + m); };
    for (int j = 0; j < J; ++j) {
        const KamState& cur = res.states.back();
        if (!(c.c_hat * cur.E_hat < 1)) fail(j, "c_hat E_hat >= 1");
        if (!(cur.lambda >= pow(cur.K, -kreal(in.tau)) * in.gamma2)) fail(j, "lambda < gamma2/K^tau");
        KamState nx;
        try {
            nx = step(cur, in);
        } catch (const Error& e) {
            fail(j + 1, e.what());
            break;
        }
        if (!(nx.E_hat < cur.E_hat * cur.E_hat)) fail(j + 1, "E_hat not below previous E_hat^2");
        if (!(nx.lambda >= lambda0 / 2)) fail(j + 1, "lambda below lambda0/2");
        if (!(nx.K < 8 * cur.K)) fail(j + 1, "K not below 8 K_prev");
        if (!(nx.rho_hat >= cur.rho_hat / ratio)) fail(j + 1, "rho_hat ratio bound");
        if (!(nx.rho_tilde >= cur.rho_tilde / ratio)) fail(j + 1, "rho_tilde ratio bound");
        res.states.push_back(nx);
    }
    res.verdict = res.failures.empty();
    return res;
}

KamInput sample_admissible(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto logu = [&](double a, double b) { return a * std::pow(b / a, u(rng)); };
    for (;;) {
        KamInput in;
        in.n1 = 1 + int(u(rng) * 2);
        in.n2 = int(u(rng) * 2);
        in.tau = in.n() + 0.1 + u(rng);
        in.gamma1 = logu(1e-2, 1.0);
        in.gamma2 = in.gamma1 * logu(1e-2, 1.0);
        in.eps = logu(1e-2, 1.0);
        in.eps_bar = in.eps * logu(0.1, 2.0);
        in.s = std::min(0.5, in.eps / (in.eps_bar + in.eps)) * logu(0.2, 1.0);
        in.rho = logu(1e-3, 1.0);
        in.M = logu(0.5, 2.0);
        in.M_hat = in.M * logu(0.5, 1.0);
        in.M_bar = logu(0.5, 2.0);
        in.M_bar1 = in.M_bar;
        in.M_bar2 = in.M_bar;
        in.lambda = 2 * std::pow(in.s, in.tau) * in.gamma2 / std::pow(6.0, in.tau) * logu(1.0, 1e3);
        // E from a target c_hat E_hat, by fixed point (K depends on E only logarithmically)
        const double q = logu(1e-6, 0.5);
        const auto c = constants(in.n(), in.tau);
        in.E = 1e-20;
        for (int it = 0; it < 60; ++it) {
            KamState st = initial_state(in);
            in.E = static_cast<double>(kreal(q) / c.c_hat * st.rho_hat * st.rho_tilde / st.L);
        }
        if (check_conditions(in).pass()) return in;
    }
}

DiophantineReport diophantine_check(const std::vector<double>& w1, const std::vector<double>& w2, double g1, double g2,
                                    double tau, int Kmax) {
    DiophantineReport r;
    const int n1 = int(w1.size()), n = n1 + int(w2.size());
    std::vector<double> w(w1);
    w.insert(w.end(), w2.begin(), w2.end());
    r.worst_margin1 = r.worst_margin2 = std::numeric_limits<double>::infinity();
    std::vector<int> k(n, 0);
    std::function<void(int, int)> rec = [&](int i, int budget) {
        if (i == n) {
            int norm = 0, norm2 = 0;
            bool k1zero = true;
            double dot = 0;
            for (int t = 0; t < n; ++t) {
                norm += std::abs(k[t]);
                if (t < n1 && k[t] != 0) k1zero = false;
                if (t >= n1) norm2 += std::abs(k[t]);
                dot += w[t] * k[t];
            }
            if (norm == 0) return;
            if (!k1zero) {
                double m = std::abs(dot) * std::pow(norm, tau) / g1;
                if (m < r.worst_margin1) r.worst_margin1 = m, r.worst_k1 = k;
                if (m < 1 && r.pass) r.pass = false, r.failing_k = k;
            } else {
                double m = std::abs(dot) * std::pow(norm2, tau) / g2;
                if (m < r.worst_margin2) r.worst_margin2 = m, r.worst_k2 = k;
                if (m < 1 && r.pass) r.pass = false, r.failing_k = k;
            }
            return;
        }
        for (int v = -budget; v <= budget; ++v) {
            k[i] = v;
            rec(i + 1, budget - std::abs(v));
        }
        k[i] = 0;
    };
    rec(0, Kmax);
    return r;
}

double c_n(int n, double E) { return std::pow(1 + std::pow(1 + 256.0 * n * E, 2.0 * n), 2.0); }

ThresholdReport thresholds_and_measures(double eps, int s, double a, double P0, double eta, int n, double E,
                                        const Calibration& cal) {
    ThresholdReport r{};
    const double li = std::log(1 / eps);
    r.mu_stable = std::pow(eps, 2.0 * s + 2) / (cal.C_star * std::pow(li, cal.c_star));
    r.defect_exponent_stable = s - 1.5;
    r.measure_stable = 1 - cal.C_star * std::pow(eps, r.defect_exponent_stable);
    r.a_threshold = cal.a_star * std::pow(eps, 4);
    r.mu_hyper = cal.C_star * std::pow(a * P0, 1 + eta) / std::pow(std::log(1 / a), cal.c_star);
    r.measure_hyper = 1 - cal.C_star * std::sqrt(a);
    r.mu_stable_relaxed = 1 / (cal.C_star * std::pow(li, 2 * cal.b));
    r.mu_hyper_relaxed = 1 / (cal.C_star * std::pow(std::log(1 / (a * P0)), 2 * cal.b));
    r.sigma = s - 3.5;
    r.c_n = c_n(n, E);
    return r;
}

std::string kam_csv(const RunResult& r) {
    std::ostringstream os;
    os.precision(12);
    os << std::scientific;
    os << "j,K,rho_hat,E_hat,lambda\n";
    for (const auto& s : r.states)
        os << s.j << ',' << s.K << ',' << s.rho_hat << ',' << s.E_hat << ','
           << s.lambda << '\n';
    return os.str();
}

}  // namespace tskam
