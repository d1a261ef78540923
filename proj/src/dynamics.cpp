#include "tskam/dynamics.hpp"

#include "tskam/averaging.hpp"
#include "tskam/bnf.hpp"

#include "json.hpp"

#include <boost/math/tools/roots.hpp>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tskam {

namespace {

using cplx = std::complex<double>;

double inner_period(const CartesianState& s, const MassParams& mp) {
    const KeplerOrbit o = kepler_orbit(s.y1, s.x1, mp.mred(1), mp.Mred(1));
    return kTwoPi * std::sqrt(o.a * o.a * o.a / o.M);
}

double outer_a(const CartesianState& s, const MassParams& mp) {
    return kepler_orbit(s.y2, s.x2, mp.mred(2), mp.Mred(2)).a;
}

// symmetric second-order map C(h/2) B(h/2) A(h) B(h/2) C(h/2)
void wh2(CartesianState& s, const MassParams& mp, double h) {
    auto jump = [&](double t) {
        const Vec3 d1 = mp.mu * t / mp.m0 * s.y2, d2 = mp.mu * t / mp.m0 * s.y1;
        s.x1 += d1;
        s.x2 += d2;
    };
    auto kick = [&](double t) {
        const Vec3 d = s.x1 - s.x2;
        const double r = d.norm();
        const Vec3 f = mp.mu * mp.m1 * mp.m2 / (r * r * r) * d;
        s.y1 -= t * f;
        s.y2 += t * f;
    };
    jump(h / 2);
    kick(h / 2);
    kepler_drift(s.x1, s.y1, mp.mred(1), mp.Mred(1), h);
    kepler_drift(s.x2, s.y2, mp.mred(2), mp.Mred(2), h);
    kick(h / 2);
    jump(h / 2);
}

const std::vector<double>& composition(const std::string& scheme) {
    static const std::vector<double> c2{1.0};
    static const std::vector<double> c4 = [] {
        const double w1 = 1.0 / (2.0 - std::cbrt(2.0)), w0 = 1.0 - 2.0 * w1;
        return std::vector<double>{w1, w0, w1};
    }();
    // Yoshida's sixth-order solution A
    static const std::vector<double> c6 = [] {
        const double w1 = -1.17767998417887, w2 = 0.235573213359357, w3 = 0.784513610477560;
        const double w0 = 1.0 - 2.0 * (w1 + w2 + w3);
        return std::vector<double>{w3, w2, w1, w0, w1, w2, w3};
    }();
    if (scheme == "wh2") return c2;
    if (scheme == "wh4") return c4;
    if (scheme == "wh6") return c6;
    throw Error(Error::Kind::Config, "integrator: unknown scheme '" + scheme + "'");
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

struct NaffWork {
    std::vector<double> t, w;
    double W = 0;
    NaffWork(std::size_t N, double dt) : t(N), w(N) {
        for (std::size_t j = 0; j < N; ++j) {
            t[j] = j * dt;
            w[j] = 1.0 - std::cos(kTwoPi * j / (N - 1));
            W += w[j];
        }
    }
    // A(omega) = <r, e^{i omega t}>_w and d|A|^2/d omega
    std::pair<cplx, double> eval(const std::vector<cplx>& r, double om) const {
        cplx A = 0, dA = 0;
        for (std::size_t j = 0; j < r.size(); ++j) {
            const cplx e = w[j] * r[j] * std::polar(1.0, -om * t[j]);
            A += e;
            dA += cplx(0, -t[j]) * e;
        }
        A /= W;
        dA /= W;
        return {A, 2 * (std::conj(A) * dA).real()};
    }
};

double refine(const NaffWork& nw, const std::vector<cplx>& r, double om0, double width) {
    auto D = [&](double om) { return nw.eval(r, om).second; };
    double lo = om0 - width, hi = om0 + width;
    for (int k = 0; k < 8 && !(D(lo) > 0 && D(hi) < 0); ++k) lo -= width / 2, hi += width / 2;
    if (!(D(lo) > 0 && D(hi) < 0)) return om0;
    boost::uintmax_t it = 200;
    const auto br = boost::math::tools::toms748_solve(D, lo, hi, boost::math::tools::eps_tolerance<double>(50), it);
    return 0.5 * (br.first + br.second);
}

std::vector<FrequencyComponent> naff_core(const std::vector<cplx>& s, double dt, int nfreq) {
    const std::size_t N = s.size();
    const NaffWork nw(N, dt);
    std::size_t Np = 1;
    while (Np < 4 * N) Np <<= 1;
    Eigen::FFT<double> fft;
    std::vector<cplx> r = s;
    std::vector<FrequencyComponent> out;
    auto subtract = [&](double om, cplx a, double sign) {
        for (std::size_t j = 0; j < N; ++j) r[j] -= sign * a * std::polar(1.0, om * nw.t[j]);
    };
    const double width = kTwoPi / (Np * dt);
    for (int c = 0; c < nfreq; ++c) {
        std::vector<cplx> in(Np, 0.0), spec;
        for (std::size_t j = 0; j < N; ++j) in[j] = nw.w[j] * r[j];
        fft.fwd(spec, in);
        std::size_t best = 0;
        for (std::size_t k = 1; k < Np; ++k)
            if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
        const double kk = best <= Np / 2 ? static_cast<double>(best) : static_cast<double>(best) - static_cast<double>(Np);
        const double om = refine(nw, r, kk * width, 2 * width);
        const cplx a = nw.eval(r, om).first;
        out.push_back({om, a, 0.0});
        subtract(om, a, 1.0);
    }
    // second sweep: each frequency re-refined with the others removed
    for (auto& f : out) {
        subtract(f.frequency, f.amplitude, -1.0);
        f.frequency = refine(nw, r, f.frequency, width);
        f.amplitude = nw.eval(r, f.frequency).first;
        subtract(f.frequency, f.amplitude, 1.0);
    }
    return out;
}

Eigen::VectorXd rps_z(const RpsCoords& r) {
    Eigen::VectorXd z(6);
    z << r.eta1, r.eta2, r.p, r.xi1, r.xi2, r.q;
    return z;
}

}  // namespace

void validate(const IntegratorConfig& c) {
    composition(c.scheme);
    if (!(c.time > 0)) throw Error(Error::Kind::Config, "integrator: time must be > 0");
    if (c.step < 0 || !std::isfinite(c.step)) throw Error(Error::Kind::Config, "integrator: step must be > 0");
    if (c.stride < 1) throw Error(Error::Kind::Config, "integrator: stride must be >= 1");
    if (!(c.collision_factor > 0)) throw Error(Error::Kind::Config, "integrator: collision_factor must be > 0");
}

Vec3 angular_momentum(const CartesianState& s) { return s.x1.cross(s.y1) + s.x2.cross(s.y2); }

void kepler_drift(Vec3& x, Vec3& y, double m, double M, double tau) {
    const Vec3 v = y / m;
    const double r0 = x.norm();
    const double alpha = 2.0 / r0 - v.squaredNorm() / M;  // 1/a
    if (!(alpha > 0)) throw Error(Error::Kind::Numerical, "kepler drift: osculating orbit is not bound");
    const double a = 1.0 / alpha;
    const double n = std::sqrt(M * alpha * alpha * alpha);
    const double c0 = 1.0 - r0 * alpha;          // e cos E0
    const double s0 = x.dot(v) / (n * a * a);    // e sin E0
    const double ntau = n * tau;
    const double k = std::round(ntau / kTwoPi);
    const double Mr = ntau - k * kTwoPi;
    // x - c0 sin x + s0 (1 - cos x) = Mr, monotone since e < 1
    auto g = [&](double E) { return E - c0 * std::sin(E) + s0 * (1 - std::cos(E)) - Mr; };
    double lo = Mr - 2, hi = Mr + 2, E = Mr;
    for (int it = 0; it < 100; ++it) {
        const double gv = g(E);
        if (gv > 0) hi = E; else lo = E;
        const double dg = 1 - c0 * std::cos(E) + s0 * std::sin(E);
        double En = E - gv / dg;
        if (!(En > lo && En < hi)) En = 0.5 * (lo + hi);
        if (std::abs(En - E) <= 1e-16 * std::max(1.0, std::abs(E))) {
            E = En;
            break;
        }
        E = En;
    }
    const double omc = 2 * std::sin(E / 2) * std::sin(E / 2);  // 1 - cos E
    const double sE = std::sin(E);
    const double EmS = std::abs(E) < 1e-2
        ? E * E * E / 6 * (1 - E * E / 20 * (1 - E * E / 42 * (1 - E * E / 72)))
        : E - sE;
    const double dE = E + k * kTwoPi;
    const double f = 1 - a / r0 * omc;
    const double gg = tau - (EmS + (dE - E)) / n;
    const Vec3 x1 = f * x + gg * v;
    const double r1 = x1.norm();
    const double fd = -std::sqrt(M * a) * sE / (r1 * r0);
    const double gd = 1 - a / r1 * omc;
    const Vec3 v1 = fd * x + gd * v;
    x = x1;
    y = m * v1;
}

CartesianState wh_step(const CartesianState& s0, const MassParams& mp, double tau, const std::string& scheme) {
    CartesianState s = s0;
    for (double c : composition(scheme)) wh2(s, mp, c * tau);
    return s;
}

double Trajectory::max_energy_error() const {
    return energy_error.empty() ? 0.0 : *std::max_element(energy_error.begin(), energy_error.end());
}
double Trajectory::max_c_error() const {
    return c_error.empty() ? 0.0 : *std::max_element(c_error.begin(), c_error.end());
}

CartesianState reverse_momenta(const CartesianState& s) { return {-s.y1, -s.y2, s.x1, s.x2}; }

void integrate(const CartesianState& s0, const MassParams& mp, const IntegratorConfig& cfg,
               const std::function<void(double, const CartesianState&)>& observer) {
    validate(cfg);
    const double h0 = cfg.step > 0 ? cfg.step : inner_period(s0, mp) / 64;
    // a whole number of strides, so recorded samples are uniform and the last one lands on cfg.time
    long nsteps = std::max(1L, static_cast<long>(std::ceil(cfg.time / h0 - 1e-9)));
    nsteps = (nsteps + cfg.stride - 1) / cfg.stride * cfg.stride;
    const double h = cfg.time / nsteps;
    const double dmin = cfg.collision_factor * outer_a(s0, mp);
    const auto& coeffs = composition(cfg.scheme);
    CartesianState s = s0;
    observer(0.0, s);
    for (long i = 1; i <= nsteps; ++i) {
        for (double c : coeffs) wh2(s, mp, c * h);
        const double d = (s.x1 - s.x2).norm();
        if (!(d >= dmin))
            throw Error(Error::Kind::Collision,
                        "integrate: |x1 - x2| = " + std::to_string(d) + " below threshold at t = " + std::to_string(i * h));
        if (i % cfg.stride == 0) observer(i * h, s);
    }
}

Trajectory integrate(const CartesianState& s0, const MassParams& mp, const IntegratorConfig& cfg) {
    Trajectory tr;
    tr.E0 = hamiltonian(s0, mp);
    tr.C0 = angular_momentum(s0);
    tr.step = cfg.step > 0 ? cfg.step : inner_period(s0, mp) / 64;
    const double cn = std::max(tr.C0.norm(), 1e-300), en = std::max(std::abs(tr.E0), 1e-300);
    integrate(s0, mp, cfg, [&](double t, const CartesianState& s) {
        tr.t.push_back(t);
        tr.states.push_back(s);
        tr.energy_error.push_back(std::abs(hamiltonian(s, mp) - tr.E0) / en);
        tr.c_error.push_back((angular_momentum(s) - tr.C0).norm() / cn);
    });
    return tr;
}

std::vector<FrequencyComponent> naff(const std::vector<cplx>& signal, double dt, int nfreq) {
    if (signal.size() < 64) throw Error(Error::Kind::Domain, "naff: need at least 64 samples");
    if (!(dt > 0) || nfreq < 1) throw Error(Error::Kind::Config, "naff: dt > 0 and nfreq >= 1 required");
    auto full = naff_core(signal, dt, nfreq);
    const std::size_t h = signal.size() / 2;
    const auto a = naff_core(std::vector<cplx>(signal.begin(), signal.begin() + h), dt, nfreq);
    const auto b = naff_core(std::vector<cplx>(signal.end() - h, signal.end()), dt, nfreq);
    for (auto& f : full) {
        double res = 0;
        for (const auto* half : {&a, &b}) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& g : *half) best = std::min(best, std::abs(g.frequency - f.frequency));
            res = std::max(res, best);
        }
        f.residual = res;
    }
    return full;
}

FrequencySpectrum frequency_analysis(const Trajectory& tr, const MassParams& mp, const std::vector<std::string>& signals,
                                     double tol) {
    if (tr.t.size() < 64) throw Error(Error::Kind::Domain, "frequency_analysis: trajectory too short");
    const double dt = tr.t[1] - tr.t[0];
    for (std::size_t i = 2; i < tr.t.size(); ++i)
        if (std::abs(tr.t[i] - tr.t[i - 1] - dt) > 1e-9 * dt)
            throw Error(Error::Kind::Domain, "frequency_analysis: samples must be uniform");
    FrequencySpectrum fs;
    fs.signals = signals;
    fs.span = tr.t.back() - tr.t.front();
    std::vector<RpsCoords> rps;
    auto need_rps = [&] {
        if (rps.empty())
            for (const auto& s : tr.states) rps.push_back(rps_from_cartesian(s, mp));
    };
    fs.quasi_periodic = true;
    for (const auto& name : signals) {
        std::vector<cplx> sig;
        bool slow = false;
        if (name == "lambda1" || name == "lambda2") {
            need_rps();
            for (const auto& r : rps) sig.push_back(std::polar(1.0, name == "lambda1" ? r.lambda1 : r.lambda2));
        } else if (name == "x1" || name == "x2") {
            for (const auto& s : tr.states) {
                const Vec3& x = name == "x1" ? s.x1 : s.x2;
                sig.emplace_back(x[0], x[1]);
            }
        } else if (name == "eta1" || name == "eta2" || name == "pq") {
            need_rps();
            slow = true;
            for (const auto& r : rps) {
                if (name == "eta1") sig.emplace_back(r.eta1, r.xi1);
                else if (name == "eta2") sig.emplace_back(r.eta2, r.xi2);
                else sig.emplace_back(r.p, r.q);
            }
        } else {
            throw Error(Error::Kind::Config, "frequency_analysis: unknown signal '" + name + "'");
        }
        const FrequencyComponent f = naff(sig, dt, 1).front();
        if (slow && std::abs(f.frequency) * fs.span < kTwoPi * 128)
            throw Error(Error::Kind::Domain, "frequency_analysis: span covers fewer than 2^7 periods of signal '" + name + "'");
        if (!(f.residual <= tol * (std::abs(f.frequency) + kTwoPi / fs.span))) fs.quasi_periodic = false;
        (slow ? fs.slow : fs.fast).push_back(f);
    }
    return fs;
}

void attach_diophantine(FrequencySpectrum& fs, double gamma1, double gamma2, double tau, int Kmax) {
    std::vector<double> w1, w2;
    for (const auto& f : fs.fast) w1.push_back(f.frequency);
    for (const auto& f : fs.slow) w2.push_back(f.frequency);
    fs.diophantine = diophantine_check(w1, w2, gamma1, gamma2, tau, Kmax);
    fs.diophantine_checked = true;
}

StabilityReport stability_rps(const RpsCoords& seed, const MassParams& mp, const IntegratorConfig& cfg) {
    StabilityReport rep;
    rep.chart = "rps";
    const CartesianState s0 = cartesian_from_rps(seed, mp);
    rep.amplitude0 = rps_z(seed).norm();
    integrate(s0, mp, cfg, [&](double t, const CartesianState& s) {
        const double a = rps_z(rps_from_cartesian(s, mp)).norm();
        rep.t.push_back(t);
        rep.amplitude.push_back(a);
        rep.max_amplitude = std::max(rep.max_amplitude, a);
    });
    rep.classification = rep.max_amplitude <= 2 * rep.amplitude0 ? "elliptic" : "inconclusive";
    return rep;
}

TransverseLinearization transverse_linearization(double L1, double L2, double G2, double G, const MassParams& mp, int N) {
    auto F = [&](double Th, double th) {
        return average_perturbation(cartesian_from_perihelia(perihelia_point(L1, L2, G2, Th, th, G), mp), mp, N);
    };
    const double hT = 1e-3 * G, ht = 1e-3;
    const double c1[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
    const int off[4] = {-2, -1, 1, 2};
    const double f0 = F(0, 0);
    auto d2 = [&](bool theta) {
        double s = -30.0 / 12 * f0;
        const double w[4] = {-1.0 / 12, 16.0 / 12, 16.0 / 12, -1.0 / 12};
        for (int a = 0; a < 4; ++a) s += w[a] * (theta ? F(off[a] * hT, 0) : F(0, off[a] * ht));
        return s / (theta ? hT * hT : ht * ht);
    };
    double mixed = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) mixed += c1[a] * c1[b] * F(off[a] * hT, off[b] * ht);
    mixed /= hT * ht;
    const double HTT = d2(true), Htt = d2(false);
    const double mu = mp.mu > 0 ? mp.mu : 1.0;
    TransverseLinearization L;
    // Theta' = -dF/dvartheta, vartheta' = dF/dTheta
    L.A << -mixed, -Htt, HTT, mixed;
    L.A *= mu;
    Eigen::EigenSolver<Eigen::Matrix2d> es(L.A);
    int k = es.eigenvalues()[0].real() > es.eigenvalues()[1].real() ? 0 : 1;
    if (std::abs(es.eigenvalues()[k].imag()) > 1e-6 * std::abs(es.eigenvalues()[k]))
        throw Error(Error::Kind::NotElliptic, "transverse linearization: no real unstable direction");
    L.lambda = es.eigenvalues()[k].real();
    L.unstable = es.eigenvectors().col(k).real().normalized();
    const Eigen::Matrix2d V = es.eigenvectors().real();
    const Eigen::Matrix2d Vi = V.inverse();
    L.left = Vi.row(k).transpose();
    L.left /= L.left.dot(L.unstable);
    return L;
}

StabilityReport stability_perihelia(double L1, double L2, double G2, double G, double delta, const MassParams& mp,
                                    const IntegratorConfig& cfg, double growth_cap) {
    const TransverseLinearization lin = transverse_linearization(L1, L2, G2, G, mp);
    StabilityReport rep;
    rep.chart = "perihelia";
    rep.predicted_rate = lin.lambda;
    const PeriheliaCoords seed = perihelia_point(L1, L2, G2, delta * lin.unstable[0], delta * lin.unstable[1], G);
    const CartesianState s0 = cartesian_from_perihelia(seed, mp);
    const double P2 = kTwoPi * std::sqrt(std::pow(outer_a(s0, mp), 3) / mp.Mred(2));
    rep.amplitude0 = delta;
    // window means over one outer period remove most of the short-period motion
    double acc = 0, t0 = 0;
    int cnt = 0;
    bool stop = false;
    struct Stop {};
    try {
        integrate(s0, mp, cfg, [&](double t, const CartesianState& s) {
            const PeriheliaCoords p = perihelia_from_cartesian(s, mp);
            acc += lin.left.dot(Eigen::Vector2d(p.Theta, wrap_pi(p.vartheta)));
            ++cnt;
            if (t - t0 >= P2) {
                const double a = std::abs(acc / cnt);
                rep.t.push_back(0.5 * (t + t0));
                rep.amplitude.push_back(a);
                rep.max_amplitude = std::max(rep.max_amplitude, a);
                acc = 0, cnt = 0, t0 = t;
                if (a > growth_cap * delta) {
                    stop = true;
                    throw Stop{};
                }
            }
        });
    } catch (const Stop&) {
    }
    (void)stop;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < rep.t.size(); ++i)
        if (rep.amplitude[i] > 0) {
            x.push_back(rep.t[i]);
            y.push_back(std::log(rep.amplitude[i]));
        }
    if (x.size() >= 4) rep.growth_rate = linear_slope(x, y);
    const bool grew = rep.max_amplitude > std::exp(2.0) * delta;
    rep.classification = grew && rep.growth_rate > 0 ? "hyperbolic" : "inconclusive";
    return rep;
}

SlowSweep slow_frequency_sweep(double L1, double L2, const MassParams& base, const std::vector<double>& mus, int mode,
                               double rho, double time, const std::string& scheme, double step) {
    if (mus.size() < 2) throw Error(Error::Kind::Domain, "slow sweep: need at least two mu values");
    SlowSweep sw;
    QuadratureConfig q;
    q.strict = false;
    for (double mu : mus) {
        if (!(mu > 0)) throw Error(Error::Kind::Domain, "slow sweep: mu must be > 0");
        MassParams mp = base;
        mp.mu = mu;
        const EquilibriumReport eq = elliptic_equilibrium_check(L1, L2, mp, q);
        const Diagonalization D = diagonalize_quadratic(eq.hessian);
        if (mode < 0 || mode >= 3) throw Error(Error::Kind::Config, "slow sweep: mode must be 0, 1 or 2");
        // the other modes carry 0.3 rho: a coplanar seed sits on the singular set of the inverse chart
        Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
        for (int k = 0; k < 3; ++k) w[k] = k == mode ? rho : 0.3 * rho;
        const Eigen::VectorXd z = D.M * w;
        const RpsCoords seed{L1, L2, z[0], z[1], z[2], (L1 - L2) * std::cos(0.4), 0.0, 1.0, z[3], z[4], z[5], 0.2};
        Eigen::MatrixXd S = Eigen::MatrixXd::Zero(6, 6);
        S.block(0, 3, 3, 3) = Eigen::Matrix3d::Identity();
        S.block(3, 0, 3, 3) = -Eigen::Matrix3d::Identity();
        const Eigen::MatrixXd Minv = -S * D.M.transpose() * S;
        IntegratorConfig cfg;
        cfg.scheme = scheme;
        cfg.step = step;
        cfg.time = time;
        const CartesianState s0 = cartesian_from_rps(seed, mp);
        const double h = step > 0 ? step : inner_period(s0, mp) / 64;
        cfg.stride = std::max(1, static_cast<int>(time / h / 20000));
        std::vector<double> ts, ph;
        double prev = 0;
        integrate(s0, mp, cfg, [&](double t, const CartesianState& s) {
            const Eigen::VectorXd wb = Minv * rps_z(rps_from_cartesian(s, mp));
            double a = std::atan2(wb[3 + mode], wb[mode]);
            if (!ph.empty()) a = prev + wrap_pi(a - prev);
            prev = a;
            ts.push_back(t);
            ph.push_back(a);
        });
        sw.points.push_back({mu, linear_slope(ts, ph), mu * D.Omega[mode]});
    }
    std::vector<double> lx, ly;
    for (const auto& p : sw.points) {
        lx.push_back(std::log(p.mu));
        ly.push_back(std::log(std::abs(p.rate)));
    }
    sw.exponent = linear_slope(lx, ly);
    return sw;
}

std::string trajectory_csv(const Trajectory& tr, const MassParams& mp, const std::string& chart) {
    std::ostringstream os;
    os.precision(17);
    if (chart == "cartesian")
        os << "t,y1x,y1y,y1z,y2x,y2y,y2z,x1x,x1y,x1z,x2x,x2y,x2z,energy_error,c_error\n";
    else if (chart == "rps")
        os << "t,Lambda1,Lambda2,eta1,eta2,p,Z,lambda1,lambda2,xi1,xi2,q,zeta,energy_error,c_error\n";
    else if (chart == "jrd")
        os << "t,Lambda1,Lambda2,Gamma1,Gamma2,G,Z,ell1,ell2,gamma1,gamma2,gamma,zeta,energy_error,c_error\n";
    else if (chart == "perihelia")
        os << "t,Lambda1,Lambda2,Gamma2,Theta,G,Z,ell1,ell2,g2,vartheta,g,zeta,energy_error,c_error\n";
    else
        throw Error(Error::Kind::Config, "trajectory_csv: unknown chart '" + chart + "'");
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const auto& s = tr.states[i];
        Phase12 z;
        if (chart == "cartesian") z = s.phase();
        else if (chart == "rps") z = rps_from_cartesian(s, mp).phase();
        else if (chart == "jrd") z = jrd_from_cartesian(s, mp).phase();
        else z = perihelia_from_cartesian(s, mp).phase();
        os << tr.t[i];
        for (int k = 0; k < 12; ++k) os << ',' << z[k];
        os << ',' << tr.energy_error[i] << ',' << tr.c_error[i] << '\n';
    }
    return os.str();
}

std::string to_json(const FrequencySpectrum& fs) {
    nlohmann::ordered_json j;
    auto comps = [](const std::vector<FrequencyComponent>& v) {
        auto a = nlohmann::ordered_json::array();
        for (const auto& f : v)
            a.push_back({{"frequency", f.frequency},
                         {"amplitude", {f.amplitude.real(), f.amplitude.imag()}},
                         {"residual", f.residual}});
        return a;
    };
    j["signals"] = fs.signals;
    j["span"] = fs.span;
    j["fast"] = comps(fs.fast);
    j["slow"] = comps(fs.slow);
    j["quasi_periodic"] = fs.quasi_periodic;
    if (fs.diophantine_checked)
        j["diophantine"] = {{"pass", fs.diophantine.pass},
                            {"worst_margin1", fs.diophantine.worst_margin1},
                            {"worst_margin2", fs.diophantine.worst_margin2}};
    return j.dump(2);
}

std::string to_json(const StabilityReport& r) {
    nlohmann::ordered_json j;
    j["chart"] = r.chart;
    j["classification"] = r.classification;
    j["amplitude0"] = r.amplitude0;
    j["max_amplitude"] = r.max_amplitude;
    j["growth_rate"] = r.growth_rate;
    j["predicted_rate"] = r.predicted_rate;
    j["samples"] = r.t.size();
    return j.dump(2);
}

}  // namespace tskam
