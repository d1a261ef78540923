#pragma once

// Truncated Taylor-Fourier series in (I, phi, u, v):
//   f = sum c * (I - I0)^a * exp(i k.phi) * u^alpha * v^beta
// with n action-angle pairs and m oscillator pairs, {I_i, phi_i} = 1 and {u_j, v_j} = 1.
// Real oscillators: u = p, v = q. Elliptic oscillators: u = z, v = -i zbar with
// z = (p - iq)/sqrt2, zbar = (p + iq)/sqrt2, so that Omega z zbar = i Omega u v.

#include "tskam/common.hpp"

#include <complex>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tskam {

using cplx = std::complex<double>;

struct Monomial {
    std::vector<int> k;      // size n
    std::vector<int> alpha;  // size m
    std::vector<int> beta;   // size m
    std::vector<int> a;      // size n, action-jet exponent
    auto operator<=>(const Monomial&) const = default;
    int k_norm() const;
    int degree() const;       // |alpha| + |beta|
    int action_degree() const;
};

struct TruncationWindow {
    int jet_degree = 2;   // max |a|
    int max_degree = -1;  // max |alpha|+|beta|, -1 unlimited
    int max_mode = -1;    // max |k|_1, -1 unlimited
};

class TFSeries {
public:
    static constexpr double kDropTol = 1e-14;

    TFSeries() = default;
    TFSeries(int n, int m, TruncationWindow w = {}, std::vector<double> base_point = {});

    int n() const { return n_; }
    int m() const { return m_; }
    const TruncationWindow& window() const { return win_; }
    void set_window(const TruncationWindow& w);
    const std::vector<double>& base_point() const { return I0_; }
    const std::map<Monomial, cplx>& terms() const { return c_; }
    bool empty() const { return c_.empty(); }
    std::size_t size() const { return c_.size(); }

    void add(const Monomial& mono, cplx c);
    cplx coeff(const Monomial& mono) const;
    Monomial make(std::vector<int> k, std::vector<int> alpha, std::vector<int> beta, std::vector<int> a = {}) const;

    // relative pruning below kDropTol * max |c|, plus window truncation
    void prune();

    TFSeries& operator+=(const TFSeries& g);
    TFSeries& operator-=(const TFSeries& g);
    TFSeries& operator*=(cplx s);
    friend TFSeries operator+(TFSeries f, const TFSeries& g) { return f += g; }
    friend TFSeries operator-(TFSeries f, const TFSeries& g) { return f -= g; }
    friend TFSeries operator*(TFSeries f, cplx s) { return f *= s; }
    friend TFSeries operator*(cplx s, TFSeries f) { return f *= s; }
    friend TFSeries operator*(const TFSeries& f, const TFSeries& g);

    cplx evaluate(const std::vector<double>& I, const std::vector<double>& phi, const std::vector<cplx>& u,
                  const std::vector<cplx>& v) const;

private:
    int n_ = 0, m_ = 0;
    TruncationWindow win_;
    std::vector<double> I0_;
    std::map<Monomial, cplx> c_;
    void check_dims(const Monomial& mono) const;
    friend void require_same_dims(const TFSeries& f, const TFSeries& g);
};

void require_same_dims(const TFSeries& f, const TFSeries& g);

// sum |c| e^{|k| s} eps^{|alpha|+|beta|} r^{|a|}; r = 0 keeps only the jet constant term
double weighted_norm(const TFSeries& f, double s, double eps, double r = 0.0);

// combined: keep |k|_1 + |alpha - beta|_1 <= K instead of |k|_1 <= K
TFSeries truncate_K(const TFSeries& f, int K, bool combined = false);

// L = {k : k_i = 0 for every i with free[i] == false}; empty free => trivial lattice {0}
struct Lattice {
    std::vector<bool> free;
    bool contains(const std::vector<int>& k) const;
};
TFSeries project_L(const TFSeries& f, const Lattice& L);
// k in L and alpha == beta: the part a homological step leaves in place
TFSeries normal_form_part(const TFSeries& f, const Lattice& L);
TFSeries non_normal_part(const TFSeries& f, const Lattice& L);

TFSeries poisson_bracket(const TFSeries& f, const TFSeries& g);
TFSeries derivative_phi(const TFSeries& f, int i);
TFSeries derivative_I(const TFSeries& f, int i);
TFSeries derivative_u(const TFSeries& f, int j);
TFSeries derivative_v(const TFSeries& f, int j);

struct DivisorSpec {
    std::vector<double> omega1, omega2;
    std::vector<cplx> nu;  // one entry per oscillator; a single entry is broadcast
    double alpha1 = 1.0, alpha2 = 1.0;
    int K = 1;
    Lattice lattice;
    std::vector<double> omega() const;
    cplx nu_at(int j) const;
    // omega.k + i sum nu_j (alpha_j - beta_j): {e_mono, h} = -i d e_mono for h = omega.I + sum nu_j u_j v_j
    cplx divisor(const Monomial& mono) const;
};

// h = omega.(I - I0) + sum nu_j u_j v_j
TFSeries linear_hamiltonian(const DivisorSpec& div, int m, const TruncationWindow& w = {},
                            std::vector<double> base_point = {});

// phi with {phi, h} + T_K f = normal_form_part(T_K f); throws Error::Resonance when |d| < alpha2
TFSeries solve_homological(const TFSeries& f, const DivisorSpec& div);

// sum_{j=0}^{order} L_phi^j f / j!, L_phi f = {phi, f}
TFSeries lie_transform(const TFSeries& phi, const TFSeries& f, int order);

struct NonresonanceReport {
    double min_fast = 0, min_slow = 0;  // min |d| over k1 != 0, resp. k1 == 0
    std::vector<int> argmin_fast, argmin_slow;
    bool pass = false;
    std::vector<std::vector<int>> failing;
    std::size_t scanned = 0;
};
// modes (k, l) with |k|_1 + |l|_1 <= K, l the oscillator index alpha - beta, (k in L, l = 0) excluded
NonresonanceReport check_nonresonance(const DivisorSpec& div, int K);

// (4n + 8m)/e^2: Cauchy-estimate constant for
// ||{f,g}||_{r-rh,s-sh,eps-eh} <= (c/delta) ||f|| ||g||, delta = min(rh sh, eh^2), rh <= r/2, eh <= eps/2
double bracket_constant_bound(int n, int m);
// max over random series of ||{f,g}||' delta / (||f|| ||g||)
double empirical_bracket_constant(int n, int m, int trials, std::mt19937_64& rng);

TFSeries random_series(int n, int m, int nterms, int kmax, int degmax, int jetmax, std::mt19937_64& rng,
                       double decay = 0.0);

std::string to_json(const TFSeries& f);
TFSeries series_from_json(const std::string& text);

}  // namespace tskam
