#include "tskam/tfseries.hpp"

#include "json.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace tskam {

namespace {

int l1(const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += std::abs(x);
    return s;
}

// correctly rounded sum (Shewchuk partials); sign-symmetric, so {f,g} + {g,f} cancels exactly
double fsum(const std::vector<double>& xs) {
    std::vector<double> p;
    for (double x : xs) {
        std::size_t i = 0;
        for (double y : p) {
            if (std::abs(x) < std::abs(y)) std::swap(x, y);
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) p[i++] = lo;
            x = hi;
        }
        p.resize(i);
        p.push_back(x);
    }
    std::size_t n = p.size();
    double hi = 0.0, lo = 0.0;
    if (n > 0) {
        hi = p[--n];
        while (n > 0) {
            const double x = hi, y = p[--n];
            hi = x + y;
            lo = y - (hi - x);
            if (lo != 0.0) break;
        }
        if (n > 0 && ((lo < 0 && p[n - 1] < 0) || (lo > 0 && p[n - 1] > 0))) {
            const double y = lo * 2, x = hi + y;
            if (y == x - hi) hi = x;
        }
    }
    return hi;
}

struct Accumulator {
    std::map<Monomial, std::pair<std::vector<double>, std::vector<double>>> parts;
    void add(const Monomial& mono, cplx c) {
        auto& e = parts[mono];
        e.first.push_back(c.real());
        e.second.push_back(c.imag());
    }
    void flush_into(TFSeries& out) {
        for (auto& [mono, e] : parts) out.add(mono, cplx(fsum(e.first), fsum(e.second)));
        out.prune();
    }
};

TruncationWindow meet(const TruncationWindow& a, const TruncationWindow& b) {
    auto mn = [](int x, int y) { return x < 0 ? y : (y < 0 ? x : std::min(x, y)); };
    return {std::min(a.jet_degree, b.jet_degree), mn(a.max_degree, b.max_degree), mn(a.max_mode, b.max_mode)};
}

bool fits(const Monomial& mono, const TruncationWindow& w) {
    if (mono.action_degree() > w.jet_degree) return false;
    if (w.max_degree >= 0 && mono.degree() > w.max_degree) return false;
    if (w.max_mode >= 0 && mono.k_norm() > w.max_mode) return false;
    return true;
}

Monomial product_key(const Monomial& x, const Monomial& y) {
    Monomial r = x;
    for (std::size_t i = 0; i < r.k.size(); ++i) r.k[i] += y.k[i], r.a[i] += y.a[i];
    for (std::size_t j = 0; j < r.alpha.size(); ++j) r.alpha[j] += y.alpha[j], r.beta[j] += y.beta[j];
    return r;
}

TFSeries like(const TFSeries& f, const TruncationWindow& w) { return TFSeries(f.n(), f.m(), w, f.base_point()); }

// derivative as (monomial, factor) lists without materialising a series
enum class Var { I, Phi, U, V };
bool differentiate(const Monomial& mono, Var var, int idx, Monomial& out, cplx& factor) {
    out = mono;
    switch (var) {
        case Var::Phi:
            if (mono.k[idx] == 0) return false;
            factor = cplx(0, mono.k[idx]);
            return true;
        case Var::I:
            if (mono.a[idx] == 0) return false;
            factor = mono.a[idx];
            --out.a[idx];
            return true;
        case Var::U:
            if (mono.alpha[idx] == 0) return false;
            factor = mono.alpha[idx];
            --out.alpha[idx];
            return true;
        case Var::V:
            if (mono.beta[idx] == 0) return false;
            factor = mono.beta[idx];
            --out.beta[idx];
            return true;
    }
    return false;
}

TFSeries derivative(const TFSeries& f, Var var, int idx) {
    TFSeries out = like(f, f.window());
    Monomial d;
    cplx fac;
    for (const auto& [mono, c] : f.terms())
        if (differentiate(mono, var, idx, d, fac)) out.add(d, fac * c);
    out.prune();
    return out;
}

}  // namespace

int Monomial::k_norm() const { return l1(k); }
int Monomial::degree() const { return l1(alpha) + l1(beta); }
int Monomial::action_degree() const { return l1(a); }

TFSeries::TFSeries(int n, int m, TruncationWindow w, std::vector<double> base_point)
    : n_(n), m_(m), win_(w), I0_(std::move(base_point)) {
    if (n < 0 || m < 0) throw Error(Error::Kind::Config, "tfseries: negative dimension");
    if (I0_.empty()) I0_.assign(n, 0.0);
    if (static_cast<int>(I0_.size()) != n) throw Error(Error::Kind::Config, "tfseries: base point size != n");
}

void TFSeries::set_window(const TruncationWindow& w) {
    win_ = w;
    prune();
}

void TFSeries::check_dims(const Monomial& mono) const {
    if (static_cast<int>(mono.k.size()) != n_ || static_cast<int>(mono.a.size()) != n_ ||
        static_cast<int>(mono.alpha.size()) != m_ || static_cast<int>(mono.beta.size()) != m_)
        throw Error(Error::Kind::Config, "tfseries: monomial dimension mismatch");
    for (int x : mono.alpha)
        if (x < 0) throw Error(Error::Kind::Config, "tfseries: negative Taylor exponent");
    for (int x : mono.beta)
        if (x < 0) throw Error(Error::Kind::Config, "tfseries: negative Taylor exponent");
    for (int x : mono.a)
        if (x < 0) throw Error(Error::Kind::Config, "tfseries: negative jet exponent");
}

Monomial TFSeries::make(std::vector<int> k, std::vector<int> alpha, std::vector<int> beta, std::vector<int> a) const {
    if (k.empty()) k.assign(n_, 0);
    if (alpha.empty()) alpha.assign(m_, 0);
    if (beta.empty()) beta.assign(m_, 0);
    if (a.empty()) a.assign(n_, 0);
    Monomial mono{std::move(k), std::move(alpha), std::move(beta), std::move(a)};
    check_dims(mono);
    return mono;
}

void TFSeries::add(const Monomial& mono, cplx c) {
    check_dims(mono);
    if (c == cplx(0) || !fits(mono, win_)) return;
    auto [it, fresh] = c_.try_emplace(mono, c);
    if (!fresh) {
        it->second += c;
        if (it->second == cplx(0)) c_.erase(it);
    }
}

cplx TFSeries::coeff(const Monomial& mono) const {
    auto it = c_.find(mono);
    return it == c_.end() ? cplx(0) : it->second;
}

void TFSeries::prune() {
    double mx = 0;
    for (const auto& [mono, c] : c_) mx = std::max(mx, std::abs(c));
    const double tol = kDropTol * mx;
    std::erase_if(c_, [&](const auto& e) { return std::abs(e.second) <= tol || !fits(e.first, win_); });
}

void require_same_dims(const TFSeries& f, const TFSeries& g) {
    if (f.n_ != g.n_ || f.m_ != g.m_) throw Error(Error::Kind::Config, "tfseries: dimension mismatch");
    for (int i = 0; i < f.n_; ++i)
        if (f.I0_[i] != g.I0_[i]) throw Error(Error::Kind::Config, "tfseries: base point mismatch");
}

TFSeries& TFSeries::operator+=(const TFSeries& g) {
    require_same_dims(*this, g);
    for (const auto& [mono, c] : g.c_) add(mono, c);
    prune();
    return *this;
}

TFSeries& TFSeries::operator-=(const TFSeries& g) {
    require_same_dims(*this, g);
    for (const auto& [mono, c] : g.c_) add(mono, -c);
    prune();
    return *this;
}

TFSeries& TFSeries::operator*=(cplx s) {
    if (s == cplx(0)) {
        c_.clear();
        return *this;
    }
    for (auto& e : c_) e.second *= s;
    return *this;
}

TFSeries operator*(const TFSeries& f, const TFSeries& g) {
    require_same_dims(f, g);
    const TruncationWindow w = meet(f.window(), g.window());
    Accumulator acc;
    for (const auto& [x, cx] : f.terms())
        for (const auto& [y, cy] : g.terms()) {
            Monomial r = product_key(x, y);
            if (fits(r, w)) acc.add(r, cx * cy);
        }
    TFSeries out = like(f, w);
    acc.flush_into(out);
    return out;
}

cplx TFSeries::evaluate(const std::vector<double>& I, const std::vector<double>& phi, const std::vector<cplx>& u,
                        const std::vector<cplx>& v) const {
    if (static_cast<int>(I.size()) != n_ || static_cast<int>(phi.size()) != n_ || static_cast<int>(u.size()) != m_ ||
        static_cast<int>(v.size()) != m_)
        throw Error(Error::Kind::Config, "tfseries: evaluation point dimension mismatch");
    std::vector<double> re, im;
    for (const auto& [mono, c] : c_) {
        double arg = 0;
        cplx t = c;
        for (int i = 0; i < n_; ++i) {
            arg += mono.k[i] * phi[i];
            t *= std::pow(I[i] - I0_[i], mono.a[i]);
        }
        t *= std::polar(1.0, arg);
        for (int j = 0; j < m_; ++j) t *= std::pow(u[j], mono.alpha[j]) * std::pow(v[j], mono.beta[j]);
        re.push_back(t.real());
        im.push_back(t.imag());
    }
    return {fsum(re), fsum(im)};
}

double weighted_norm(const TFSeries& f, double s, double eps, double r) {
    if (!(s >= 0 && eps > 0 && r >= 0)) throw Error(Error::Kind::Domain, "weighted_norm: need s >= 0, eps > 0, r >= 0");
    std::vector<double> terms;
    for (const auto& [mono, c] : f.terms())
        terms.push_back(std::abs(c) * std::exp(mono.k_norm() * s) * std::pow(eps, mono.degree()) *
                        std::pow(r, mono.action_degree()));
    return fsum(terms);
}

TFSeries truncate_K(const TFSeries& f, int K, bool combined) {
    if (K < 0) throw Error(Error::Kind::Domain, "truncate_K: K < 0");
    TFSeries out = like(f, f.window());
    for (const auto& [mono, c] : f.terms()) {
        int w = mono.k_norm();
        if (combined)
            for (int j = 0; j < f.m(); ++j) w += std::abs(mono.alpha[j] - mono.beta[j]);
        if (w <= K) out.add(mono, c);
    }
    return out;
}

bool Lattice::contains(const std::vector<int>& k) const {
    for (std::size_t i = 0; i < k.size(); ++i)
        if (k[i] != 0 && !(i < free.size() && free[i])) return false;
    return true;
}

TFSeries project_L(const TFSeries& f, const Lattice& L) {
    TFSeries out = like(f, f.window());
    for (const auto& [mono, c] : f.terms())
        if (L.contains(mono.k)) out.add(mono, c);
    return out;
}

TFSeries normal_form_part(const TFSeries& f, const Lattice& L) {
    TFSeries out = like(f, f.window());
    for (const auto& [mono, c] : f.terms())
        if (L.contains(mono.k) && mono.alpha == mono.beta) out.add(mono, c);
    return out;
}

TFSeries non_normal_part(const TFSeries& f, const Lattice& L) {
    TFSeries out = like(f, f.window());
    for (const auto& [mono, c] : f.terms())
        if (!(L.contains(mono.k) && mono.alpha == mono.beta)) out.add(mono, c);
    return out;
}

TFSeries derivative_phi(const TFSeries& f, int i) { return derivative(f, Var::Phi, i); }
TFSeries derivative_I(const TFSeries& f, int i) { return derivative(f, Var::I, i); }
TFSeries derivative_u(const TFSeries& f, int j) { return derivative(f, Var::U, j); }
TFSeries derivative_v(const TFSeries& f, int j) { return derivative(f, Var::V, j); }

TFSeries poisson_bracket(const TFSeries& f, const TFSeries& g) {
    require_same_dims(f, g);
    const TruncationWindow w = meet(f.window(), g.window());
    Accumulator acc;
    Monomial dx, dy;
    cplx fx, fy;
    auto pair_term = [&](const Monomial& x, cplx cx, Var vx, const Monomial& y, cplx cy, Var vy, int idx, double sign) {
        if (!differentiate(x, vx, idx, dx, fx) || !differentiate(y, vy, idx, dy, fy)) return;
        Monomial r = product_key(dx, dy);
        if (fits(r, w)) acc.add(r, sign * ((fx * cx) * (fy * cy)));
    };
    for (const auto& [x, cx] : f.terms())
        for (const auto& [y, cy] : g.terms()) {
            for (int i = 0; i < f.n(); ++i) {
                pair_term(x, cx, Var::I, y, cy, Var::Phi, i, 1.0);
                pair_term(x, cx, Var::Phi, y, cy, Var::I, i, -1.0);
            }
            for (int j = 0; j < f.m(); ++j) {
                pair_term(x, cx, Var::U, y, cy, Var::V, j, 1.0);
                pair_term(x, cx, Var::V, y, cy, Var::U, j, -1.0);
            }
        }
    TFSeries out = like(f, w);
    acc.flush_into(out);
    return out;
}

std::vector<double> DivisorSpec::omega() const {
    std::vector<double> w = omega1;
    w.insert(w.end(), omega2.begin(), omega2.end());
    return w;
}

cplx DivisorSpec::nu_at(int j) const {
    if (nu.empty()) return 0.0;
    if (nu.size() == 1) return nu[0];
    if (j < 0 || j >= static_cast<int>(nu.size())) throw Error(Error::Kind::Config, "divisor: oscillator index out of range");
    return nu[j];
}

cplx DivisorSpec::divisor(const Monomial& mono) const {
    const auto w = omega();
    if (w.size() != mono.k.size()) throw Error(Error::Kind::Config, "divisor: omega size != n");
    cplx d = 0;
    for (std::size_t i = 0; i < w.size(); ++i) d += w[i] * static_cast<double>(mono.k[i]);
    for (std::size_t j = 0; j < mono.alpha.size(); ++j)
        d += cplx(0, 1) * nu_at(static_cast<int>(j)) * static_cast<double>(mono.alpha[j] - mono.beta[j]);
    return d;
}

TFSeries linear_hamiltonian(const DivisorSpec& div, int m, const TruncationWindow& w, std::vector<double> base_point) {
    const auto om = div.omega();
    const int n = static_cast<int>(om.size());
    TFSeries h(n, m, w, std::move(base_point));
    for (int i = 0; i < n; ++i) {
        std::vector<int> a(n, 0);
        a[i] = 1;
        h.add(h.make({}, {}, {}, a), om[i]);
    }
    for (int j = 0; j < m; ++j) {
        std::vector<int> e(m, 0);
        e[j] = 1;
        h.add(h.make({}, e, e), div.nu_at(j));
    }
    return h;
}

TFSeries solve_homological(const TFSeries& f, const DivisorSpec& div) {
    if (!(div.alpha1 >= div.alpha2 && div.alpha2 > 0)) throw Error(Error::Kind::Config, "divisor: need alpha1 >= alpha2 > 0");
    if (static_cast<int>(div.omega().size()) != f.n()) throw Error(Error::Kind::Config, "divisor: omega size != n");
    const TFSeries target = non_normal_part(truncate_K(f, div.K), div.lattice);
    TFSeries phi = like(f, f.window());
    for (const auto& [mono, c] : target.terms()) {
        const cplx d = div.divisor(mono);
        if (!(std::abs(d) >= div.alpha2)) {
            std::string k;
            for (int x : mono.k) k += (k.empty() ? "" : ",") + std::to_string(x);
            std::string l;
            for (int j = 0; j < f.m(); ++j) l += (l.empty() ? "" : ",") + std::to_string(mono.alpha[j] - mono.beta[j]);
            throw Error(Error::Kind::Resonance, "resonant mode k=(" + k + ") alpha-beta=(" + l + "): |divisor| = " +
                                                    std::to_string(std::abs(d)) + " < alpha2");
        }
        phi.add(mono, c / (cplx(0, 1) * d));
    }
    return phi;
}

TFSeries lie_transform(const TFSeries& phi, const TFSeries& f, int order) {
    if (order < 1) throw Error(Error::Kind::Domain, "lie_transform: order < 1");
    require_same_dims(phi, f);
    TFSeries out = f, term = f;
    for (int j = 1; j <= order; ++j) {
        term = poisson_bracket(phi, term) * cplx(1.0 / j);
        if (term.empty()) break;
        out += term;
    }
    return out;
}

NonresonanceReport check_nonresonance(const DivisorSpec& div, int K) {
    if (K < 1) throw Error(Error::Kind::Domain, "check_nonresonance: K < 1");
    const auto om = div.omega();
    const int n = static_cast<int>(om.size()), n1 = static_cast<int>(div.omega1.size());
    const int m = static_cast<int>(div.nu.size());
    NonresonanceReport rep;
    rep.min_fast = rep.min_slow = std::numeric_limits<double>::infinity();
    std::vector<int> v(n + m, 0);
    std::function<void(int, int)> rec = [&](int pos, int budget) {
        if (pos == n + m) {
            std::vector<int> k(v.begin(), v.begin() + n);
            bool osc_zero = std::all_of(v.begin() + n, v.end(), [](int x) { return x == 0; });
            if (div.lattice.contains(k) && osc_zero) return;
            cplx d = 0;
            for (int i = 0; i < n; ++i) d += om[i] * static_cast<double>(v[i]);
            for (int j = 0; j < m; ++j) d += cplx(0, 1) * div.nu[j] * static_cast<double>(v[n + j]);
            const double a = std::abs(d);
            const bool fast = std::any_of(v.begin(), v.begin() + n1, [](int x) { return x != 0; });
            ++rep.scanned;
            if (fast) {
                if (a < rep.min_fast) rep.min_fast = a, rep.argmin_fast = v;
                if (a < div.alpha1) rep.failing.push_back(v);
            } else {
                if (a < rep.min_slow) rep.min_slow = a, rep.argmin_slow = v;
                if (a < div.alpha2) rep.failing.push_back(v);
            }
            return;
        }
        for (int x = -budget; x <= budget; ++x) {
            v[pos] = x;
            rec(pos + 1, budget - std::abs(x));
        }
        v[pos] = 0;
    };
    rec(0, K);
    rep.pass = rep.failing.empty();
    return rep;
}

double bracket_constant_bound(int n, int m) { return (4.0 * n + 8.0 * m) / std::exp(2.0); }

TFSeries random_series(int n, int m, int nterms, int kmax, int degmax, int jetmax, std::mt19937_64& rng, double decay) {
    TruncationWindow w;
    w.jet_degree = std::max(jetmax, 2);
    TFSeries f(n, m, w);
    std::uniform_int_distribution<int> kd(-kmax, kmax), dd(0, degmax), jd(0, jetmax);
    std::normal_distribution<double> nd;
    for (int t = 0; t < nterms; ++t) {
        std::vector<int> k(n), a(n, 0), al(m), be(m);
        for (auto& x : k) x = kd(rng);
        for (auto& x : al) x = dd(rng);
        for (auto& x : be) x = dd(rng);
        if (n > 0)
            for (int left = jd(rng); left > 0; --left) ++a[std::uniform_int_distribution<int>(0, n - 1)(rng)];
        Monomial mono{k, al, be, a};
        f.add(mono, cplx(nd(rng), nd(rng)) * std::exp(-decay * mono.k_norm()));
    }
    f.prune();
    return f;
}

double empirical_bracket_constant(int n, int m, int trials, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.05, 1.0);
    double worst = 0;
    for (int t = 0; t < trials; ++t) {
        const TFSeries f = random_series(n, m, 6, 3, 3, 2, rng), g = random_series(n, m, 6, 3, 3, 2, rng);
        const double r = 1.0, s = 0.5, eps = 1.0;
        const double rh = 0.5 * r * U(rng), sh = s * U(rng), eh = 0.5 * eps * U(rng);
        const double delta = std::min(rh * sh, eh * eh);
        const double nf = weighted_norm(f, s, eps, r), ng = weighted_norm(g, s, eps, r);
        if (nf == 0 || ng == 0) continue;
        const double nb = weighted_norm(poisson_bracket(f, g), s - sh, eps - eh, r - rh);
        worst = std::max(worst, nb * delta / (nf * ng));
    }
    return worst;
}

std::string to_json(const TFSeries& f) {
    nlohmann::ordered_json j;
    j["dims"] = {{"n", f.n()}, {"m", f.m()}};
    j["base_point"] = f.base_point();
    j["window"] = {{"jet_degree", f.window().jet_degree},
                   {"max_degree", f.window().max_degree},
                   {"max_mode", f.window().max_mode}};
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [mono, c] : f.terms())  // std::map order is lexicographic in (k, alpha, beta, a)
        arr.push_back({{"k", mono.k}, {"alpha", mono.alpha}, {"beta", mono.beta}, {"a", mono.a},
                       {"re", c.real()}, {"im", c.imag()}});
    j["entries"] = arr;
    return j.dump(2);
}

TFSeries series_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        const int n = j.at("dims").at("n"), m = j.at("dims").at("m");
        TruncationWindow w;
        if (j.contains("window")) {
            w.jet_degree = j["window"].value("jet_degree", 2);
            w.max_degree = j["window"].value("max_degree", -1);
            w.max_mode = j["window"].value("max_mode", -1);
        }
        TFSeries f(n, m, w, j.at("base_point").get<std::vector<double>>());
        for (const auto& e : j.at("entries")) {
            std::vector<int> a = e.contains("a") ? e["a"].get<std::vector<int>>() : std::vector<int>(n, 0);
            f.add(f.make(e.at("k"), e.at("alpha"), e.at("beta"), a), cplx(e.at("re"), e.at("im")));
        }
        return f;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(Error::Kind::Config, std::string("series json: ") + ex.what());
    }
}

}  // namespace tskam
