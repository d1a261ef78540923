#include "tskam/bnf.hpp"

#include "tskam/averaging.hpp"

#include "json.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <random>

namespace tskam {

namespace {

const cplx I_(0.0, 1.0);

Eigen::MatrixXd omega_matrix(int d) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    S.block(0, d, d, d) = Eigen::MatrixXd::Identity(d, d);
    S.block(d, 0, d, d) = -Eigen::MatrixXd::Identity(d, d);
    return S;
}

int total(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

TFSeries degree_part(const TFSeries& f, int deg) {
    TFSeries out(f.n(), f.m(), f.window(), f.base_point());
    for (const auto& [mono, c] : f.terms())
        if (mono.degree() == deg) out.add(mono, c);
    return out;
}

double max_coeff(const TFSeries& f) {
    double mx = 0;
    for (const auto& e : f.terms()) mx = std::max(mx, std::abs(e.second));
    return mx;
}

void uv_of(const Eigen::VectorXd& w, std::vector<cplx>& u, std::vector<cplx>& v) {
    const int d = static_cast<int>(w.size()) / 2;
    u.resize(d);
    v.resize(d);
    for (int k = 0; k < d; ++k) {
        u[k] = cplx(w[k], -w[d + k]) / std::sqrt(2.0);
        v[k] = -I_ * cplx(w[k], w[d + k]) / std::sqrt(2.0);
    }
}

// the 3BP secular Hamiltonian in diagonal variables, monopole excluded
struct SecularInDiagonal {
    RpsCoords base;
    Eigen::MatrixXd M;
    MassParams mp;
    int N;
    double operator()(const Eigen::VectorXd& w) const {
        const Eigen::VectorXd z = M * w;
        RpsCoords r = base;
        r.eta1 = z[0], r.eta2 = z[1], r.p = z[2], r.xi1 = z[3], r.xi2 = z[4], r.q = z[5];
        return secular_part(cartesian_from_rps(r, mp), mp, N);
    }
};

Eigen::VectorXd polar_point(const std::array<double, 3>& rho, const std::array<double, 3>& th) {
    Eigen::VectorXd w(6);
    for (int k = 0; k < 3; ++k) {
        w[k] = std::sqrt(2.0) * rho[k] * std::cos(th[k]);
        w[3 + k] = -std::sqrt(2.0) * rho[k] * std::sin(th[k]);
    }
    return w;
}

// coefficients of z^alpha zbar^beta, total degree <= dmax_keep, from samples on poly-circles;
// the rotation symmetry along sigma fixes m3 from (m1, m2)
TFSeries extract_taylor(const std::function<double(const Eigen::VectorXd&)>& F, const Eigen::VectorXd& sigma,
                        double rho0, int dmax_keep, int dmax_fit) {
    const int J = dmax_fit / 2 + 1;
    const int Nt = 2 * dmax_fit + 2;
    std::vector<double> t(J);
    for (int j = 0; j < J; ++j) t[j] = 0.625 + 0.375 * std::cos(kPi * (j + 0.5) / J);
    const int M = 2 * dmax_fit + 1;  // m in [-dmax_fit, dmax_fit]
    // b[tuple][m1][m2]
    std::vector<std::vector<cplx>> b(J * J * J, std::vector<cplx>(M * M));
    std::vector<double> grid(Nt * Nt);
    for (int j1 = 0; j1 < J; ++j1)
        for (int j2 = 0; j2 < J; ++j2)
            for (int j3 = 0; j3 < J; ++j3) {
                const std::array<double, 3> rho{rho0 * std::sqrt(t[j1]), rho0 * std::sqrt(t[j2]), rho0 * std::sqrt(t[j3])};
                for (int a = 0; a < Nt; ++a)
                    for (int c = 0; c < Nt; ++c)
                        grid[a * Nt + c] = F(polar_point(rho, {kTwoPi * a / Nt, kTwoPi * c / Nt, 0.0}));
                auto& bt = b[(j1 * J + j2) * J + j3];
                for (int m1 = -dmax_fit; m1 <= dmax_fit; ++m1)
                    for (int m2 = -dmax_fit; m2 <= dmax_fit; ++m2) {
                        cplx s = 0;
                        for (int a = 0; a < Nt; ++a)
                            for (int c = 0; c < Nt; ++c)
                                s += grid[a * Nt + c] * std::polar(1.0, -kTwoPi * (m1 * a + m2 * c) / Nt);
                        bt[(m1 + dmax_fit) * M + (m2 + dmax_fit)] = s / static_cast<double>(Nt * Nt);
                    }
            }
    TruncationWindow win;
    win.jet_degree = 0;
    win.max_degree = dmax_keep;
    TFSeries out(0, 3, win);
    const int s1 = sigma[0] > 0 ? 1 : -1, s2 = sigma[1] > 0 ? 1 : -1, s3 = sigma[2] > 0 ? 1 : -1;
    for (int m1 = -dmax_fit; m1 <= dmax_fit; ++m1)
        for (int m2 = -dmax_fit; m2 <= dmax_fit; ++m2) {
            const int m3 = -s3 * (s1 * m1 + s2 * m2);
            const std::array<int, 3> m{m1, m2, m3};
            const int base = std::abs(m1) + std::abs(m2) + std::abs(m3);
            if (base > dmax_fit) continue;
            std::vector<std::array<int, 3>> unk;
            for (int a = 0; 2 * a + base <= dmax_fit; ++a)
                for (int c = 0; 2 * (a + c) + base <= dmax_fit; ++c)
                    for (int e = 0; 2 * (a + c + e) + base <= dmax_fit; ++e) unk.push_back({a, c, e});
            Eigen::MatrixXcd A(J * J * J, unk.size());
            Eigen::VectorXcd rhs(J * J * J);
            for (int j1 = 0; j1 < J; ++j1)
                for (int j2 = 0; j2 < J; ++j2)
                    for (int j3 = 0; j3 < J; ++j3) {
                        const int row = (j1 * J + j2) * J + j3;
                        const std::array<double, 3> x2{t[j1], t[j2], t[j3]};
                        double lead = 1;
                        for (int k = 0; k < 3; ++k) lead *= std::pow(std::sqrt(x2[k]), std::abs(m[k]));
                        rhs[row] = b[row][(m1 + dmax_fit) * M + (m2 + dmax_fit)] / lead;
                        for (std::size_t q = 0; q < unk.size(); ++q)
                            A(row, q) = std::pow(x2[0], unk[q][0]) * std::pow(x2[1], unk[q][1]) * std::pow(x2[2], unk[q][2]);
                    }
            const Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(rhs);
            for (std::size_t q = 0; q < unk.size(); ++q) {
                const int deg = base + 2 * (unk[q][0] + unk[q][1] + unk[q][2]);
                if (deg > dmax_keep) continue;
                std::vector<int> al(3), be(3);
                int bsum = 0;
                for (int k = 0; k < 3; ++k) {
                    const int tot = std::abs(m[k]) + 2 * unk[q][k];
                    al[k] = (tot + m[k]) / 2;
                    be[k] = (tot - m[k]) / 2;
                    bsum += be[k];
                }
                // z^al zbar^be = i^|be| u^al v^be
                const cplx coef = sol[q] / std::pow(rho0, deg) * std::pow(I_, bsum);
                out.add(out.make({}, al, be), coef);
            }
        }
    out.prune();
    return out;
}

}  // namespace

Diagonalization diagonalize_quadratic(const Eigen::MatrixXd& H) {
    if (H.rows() != H.cols() || H.rows() % 2) throw Error(Error::Kind::Config, "diagonalize: need a square even-sized matrix");
    const int d = static_cast<int>(H.rows()) / 2;
    const Eigen::MatrixXd Hs = 0.5 * (H + H.transpose());
    const Eigen::MatrixXd S = omega_matrix(d);
    const Eigen::MatrixXd J = -S;
    Eigen::EigenSolver<Eigen::MatrixXd> es(J * Hs);
    const Eigen::VectorXcd ev = es.eigenvalues();
    double mx = ev.cwiseAbs().maxCoeff();
    if (!(mx > 0)) throw Error(Error::Kind::NotElliptic, "diagonalize: zero quadratic form");
    std::vector<int> idx;
    for (int i = 0; i < 2 * d; ++i) {
        if (std::abs(ev[i].real()) > 1e-8 * mx) throw Error(Error::Kind::NotElliptic, "diagonalize: spectrum not purely imaginary");
        if (ev[i].imag() > 0) idx.push_back(i);
    }
    if (static_cast<int>(idx.size()) != d) throw Error(Error::Kind::NotElliptic, "diagonalize: zero or repeated frequency");
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return ev[a].imag() < ev[b].imag(); });
    for (int k = 1; k < d; ++k)
        if (ev[idx[k]].imag() - ev[idx[k - 1]].imag() < 1e-10 * mx)
            throw Error(Error::Kind::Resonance, "diagonalize: degenerate frequencies");
    Diagonalization D;
    D.M = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    D.Omega = Eigen::VectorXd::Zero(d);
    for (int k = 0; k < d; ++k) {
        const Eigen::VectorXcd v = es.eigenvectors().col(idx[k]);
        const Eigen::VectorXd a = v.real(), b = v.imag();
        const double s = a.dot(S * b);
        if (!(std::abs(s) > 0)) throw Error(Error::Kind::Numerical, "diagonalize: degenerate eigenvector");
        const double c = 1.0 / std::sqrt(std::abs(s));
        const double w = ev[idx[k]].imag();
        D.M.col(k) = c * a;
        D.M.col(d + k) = (s > 0 ? c : -c) * b;
        D.Omega[k] = s > 0 ? -w : w;
    }
    D.symplectic_residual = (D.M.transpose() * S * D.M - S).cwiseAbs().maxCoeff();
    Eigen::VectorXd dd(2 * d);
    dd << D.Omega, D.Omega;
    D.conjugation_residual =
        (D.M.transpose() * Hs * D.M - Eigen::MatrixXd(dd.asDiagonal())).cwiseAbs().maxCoeff() / Hs.cwiseAbs().maxCoeff();
    return D;
}

Diagonalization permute(const Diagonalization& D, const std::vector<int>& perm) {
    const int d = static_cast<int>(D.Omega.size());
    Diagonalization P = D;
    for (int k = 0; k < d; ++k) {
        P.M.col(k) = D.M.col(perm[k]);
        P.M.col(d + k) = D.M.col(d + perm[k]);
        P.Omega[k] = D.Omega[perm[k]];
    }
    return P;
}

TFSeries real_p(int m, int j, const TruncationWindow& w) {
    TFSeries f(0, m, w);
    std::vector<int> e(m, 0);
    e[j] = 1;
    f.add(f.make({}, e, {}), 1.0 / std::sqrt(2.0));
    f.add(f.make({}, {}, e), I_ / std::sqrt(2.0));
    return f;
}

TFSeries real_q(int m, int j, const TruncationWindow& w) {
    TFSeries f(0, m, w);
    std::vector<int> e(m, 0);
    e[j] = 1;
    f.add(f.make({}, e, {}), I_ / std::sqrt(2.0));
    f.add(f.make({}, {}, e), 1.0 / std::sqrt(2.0));
    return f;
}

double BnfResult::r_coefficient(const std::vector<int>& a) const {
    const cplx c = normal_form.coeff(normal_form.make({}, a, a));
    return (c * std::pow(-I_, total(a))).real();
}

double BnfResult::normal_form_value(const Eigen::VectorXd& w) const {
    std::vector<cplx> u, v;
    uv_of(w, u, v);
    return normal_form.evaluate({}, {}, u, v).real();
}

Eigen::VectorXd BnfResult::transform(const Eigen::VectorXd& wbar) const {
    const int d = static_cast<int>(wbar.size()) / 2;
    std::vector<cplx> u, v;
    uv_of(wbar, u, v);
    Eigen::VectorXd w(2 * d);
    for (int k = 0; k < d; ++k) {
        const cplx zu = coordinate_map[k].evaluate({}, {}, u, v), zv = coordinate_map[d + k].evaluate({}, {}, u, v);
        w[k] = ((zu + I_ * zv) / std::sqrt(2.0)).real();
        w[d + k] = ((I_ * zu + zv) / std::sqrt(2.0)).real();
    }
    return w;
}

BnfResult birkhoff_normalize(const TFSeries& taylor, const Eigen::VectorXd& Omega, int s, double tol) {
    if (s < 2) throw Error(Error::Kind::Domain, "bnf: order s must be >= 2");
    if (taylor.n() != 0) throw Error(Error::Kind::Config, "bnf: input must be a pure oscillator series");
    const int d = taylor.m();
    if (Omega.size() != d) throw Error(Error::Kind::Config, "bnf: Omega size != oscillator count");
    TruncationWindow win;
    win.jet_degree = 0;
    win.max_degree = 2 * s;
    TruncationWindow wcoord = win;
    wcoord.max_degree = 2 * s + 1;

    BnfResult r;
    r.s = s;
    r.Omega = Omega;
    r.input = taylor;
    r.input.set_window(win);
    TFSeries H = r.input;
    const double scale = std::max(max_coeff(H), 1e-300);
    const double om = Omega.cwiseAbs().maxCoeff();

    DivisorSpec div;
    for (int k = 0; k < d; ++k) div.nu.push_back(I_ * Omega[k]);
    div.alpha1 = div.alpha2 = std::numeric_limits<double>::min();
    div.K = 0;

    for (int k = 0; k < d; ++k) {
        std::vector<int> e(d, 0);
        e[k] = 1;
        TFSeries x(0, d, wcoord);
        x.add(x.make({}, e, {}), 1.0);
        r.coordinate_map.push_back(x);
    }
    for (int k = 0; k < d; ++k) {
        std::vector<int> e(d, 0);
        e[k] = 1;
        TFSeries x(0, d, wcoord);
        x.add(x.make({}, {}, e), 1.0);
        r.coordinate_map.push_back(x);
    }

    r.min_divisor_ratio = std::numeric_limits<double>::infinity();
    for (int deg = 3; deg <= 2 * s; ++deg) {
        const TFSeries target = non_normal_part(degree_part(H, deg), Lattice{});
        if (target.empty()) continue;
        for (const auto& [mono, c] : target.terms()) {
            double wk = 0;
            int k1 = 0;
            for (int k = 0; k < d; ++k) {
                wk += Omega[k] * (mono.alpha[k] - mono.beta[k]);
                k1 += std::abs(mono.alpha[k] - mono.beta[k]);
            }
            const double ratio = std::abs(wk) / (om * k1);
            if (ratio < tol) {
                std::string ks;
                for (int k = 0; k < d; ++k) ks += (k ? "," : "") + std::to_string(mono.alpha[k] - mono.beta[k]);
                throw Error(Error::Kind::Resonance, "bnf: resonance Omega.k ~ 0 at k=(" + ks + ")");
            }
            r.min_divisor_ratio = std::min(r.min_divisor_ratio, ratio);
        }
        TFSeries chi = solve_homological(target, div);
        chi.set_window(win);
        H = lie_transform(chi, H, 2 * s);
        TFSeries chic = chi;
        chic.set_window(wcoord);
        for (auto& x : r.coordinate_map) x = lie_transform(chic, x, 2 * s + 1);
        r.generators.push_back(chi);
    }
    r.conjugation_residual = max_coeff(non_normal_part(H, Lattice{})) / scale;
    r.normal_form = normal_form_part(H, Lattice{});
    r.C0 = r.normal_form.coeff(r.normal_form.make({}, {}, {})).real();

    r.T = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l) {
            std::vector<int> a(d, 0);
            ++a[k];
            ++a[l];
            const double c = r.r_coefficient(a);
            r.T(k, l) = r.T(l, k) = (k == l) ? 2 * c : c;
        }
    for (int j = 3; j <= s; ++j) {
        std::map<std::vector<int>, double> P;
        for (const auto& [mono, c] : r.normal_form.terms())
            if (total(mono.alpha) == j) P[mono.alpha] = r.r_coefficient(mono.alpha);
        r.Pj.push_back(P);
    }
    const TFSeries poly = r.input;
    r.hamiltonian = [poly](const Eigen::VectorXd& w) {
        std::vector<cplx> u, v;
        uv_of(w, u, v);
        return poly.evaluate({}, {}, u, v).real();
    };
    return r;
}

BnfResult bnf_at(double L1, double L2, const MassParams& mp, const BnfConfig& cfg) {
    if (cfg.s < 2) throw Error(Error::Kind::Domain, "bnf: order s must be >= 2");
    QuadratureConfig q;
    q.N = std::max(cfg.N, 8);
    const EquilibriumReport eq = elliptic_equilibrium_check(L1, L2, mp, q);

    // G_rps quadratic part: -r1 + r2 + r3 in (eta1, eta2, p; xi1, xi2, q)
    Eigen::VectorXd qg(6);
    qg << -1, 1, 1, -1, 1, 1;
    auto signs = [&](const Diagonalization& Dg) {
        const Eigen::MatrixXd Gd = Dg.M.transpose() * qg.asDiagonal() * Dg.M;
        Eigen::VectorXd s(3);
        for (int k = 0; k < 3; ++k) s[k] = Gd(k, k);
        return s;
    };
    // average over the rotation group of G_rps: removes the noise components that break it
    auto symmetrize = [&](const Eigen::MatrixXd& Hz) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(6, 6);
        for (int k = 0; k < 4; ++k) {
            const double t = k * kPi / 2;
            Eigen::MatrixXd R = Eigen::MatrixXd::Zero(6, 6);
            for (int j = 0; j < 3; ++j) {
                const double c = std::cos(qg[j] * t), sn = std::sin(qg[j] * t);
                R(j, j) = c, R(j, 3 + j) = -sn, R(3 + j, j) = sn, R(3 + j, 3 + j) = c;
            }
            acc += R.transpose() * Hz * R;
        }
        return Eigen::MatrixXd(acc / 4);
    };
    auto normal_modes = [&](const Eigen::MatrixXd& Hz) {
        Diagonalization D = diagonalize_quadratic(symmetrize(Hz));
        const Eigen::VectorXd sg = signs(D);
        std::vector<int> perm{0, 1, 2};
        std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return sg[a] < sg[b]; });
        D = permute(D, perm);
        const Eigen::VectorXd sigma = signs(D);
        for (int k = 0; k < 3; ++k)
            if (std::abs(std::abs(sigma[k]) - 1) > 1e-6)
                throw Error(Error::Kind::Numerical, "bnf: first integral not diagonal in the normal modes");
        return D;
    };

    const double G0 = L1 - L2;
    const RpsCoords base{L1, L2, 0, 0, 0, G0 * std::cos(0.4), 0, 0, 0, 0, 0, 0.2};
    const double rho0 = cfg.rho_rel * std::sqrt(L2);
    const Eigen::MatrixXd S = omega_matrix(3);

    // the FD Hessian fixes the modes to ~1e-7; one pass of re-diagonalising the extracted
    // quadratic part brings them to the accuracy of the extraction
    Diagonalization D = normal_modes(eq.hessian);
    Eigen::VectorXd sigma;
    TFSeries taylor;
    double F0 = 0;
    for (int pass = 0; pass < 2; ++pass) {
        sigma = signs(D);
        const SecularInDiagonal Fx{base, D.M, mp, q.N};
        F0 = Fx(Eigen::VectorXd::Zero(6));
        auto F = [&](const Eigen::VectorXd& w) { return Fx(w) - F0; };
        taylor = extract_taylor(F, sigma, rho0, 2 * cfg.s, 2 * cfg.s + cfg.extra_degree);
        if (pass == 1) break;
        const TFSeries q2 = degree_part(taylor, 2);
        auto Q = [&](const Eigen::VectorXd& w) {
            std::vector<cplx> u, v;
            uv_of(w, u, v);
            return q2.evaluate({}, {}, u, v).real();
        };
        Eigen::MatrixXd Hw(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = i; j < 6; ++j) {
                const Eigen::VectorXd ei = Eigen::VectorXd::Unit(6, i), ej = Eigen::VectorXd::Unit(6, j);
                Hw(i, j) = Hw(j, i) = (i == j) ? 2 * Q(ei) : Q(ei + ej) - Q(ei) - Q(ej);
            }
        const Eigen::MatrixXd Minv = -S * D.M.transpose() * S;
        D = normal_modes(Minv.transpose() * Hw * Minv);
    }

    // quadratic part from the diagonalisation; extracted degrees 0..2 are discarded
    TFSeries clean(0, 3, taylor.window());
    for (const auto& [mono, c] : taylor.terms())
        if (mono.degree() >= 3) clean.add(mono, c);
    for (int k = 0; k < 3; ++k) {
        std::vector<int> e(3, 0);
        e[k] = 1;
        clean.add(clean.make({}, e, e), I_ * D.Omega[k]);
    }
    const SecularInDiagonal Fx{base, D.M, mp, q.N};
    auto F = [&](const Eigen::VectorXd& w) { return Fx(w) - F0; };

    BnfResult r = birkhoff_normalize(clean, D.Omega, cfg.s, cfg.resonance_tol);
    r.Lambda1 = L1;
    r.Lambda2 = L2;
    r.sigma = sigma;
    r.M = D.M;
    r.extraction_radius = rho0;
    const double a2 = a_from_lambda(2, L2, mp);
    r.C0 = -mp.m1 * mp.m2 / a2 + F0;

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0, kTwoPi);
    double defect = 0, ref = 0;
    for (int t = 0; t < 4; ++t) {
        const std::array<double, 3> rho{rho0, 0.8 * rho0, 0.6 * rho0};
        std::array<double, 3> th{U(rng), U(rng), U(rng)}, th2 = th;
        const double sh = U(rng);
        for (int k = 0; k < 3; ++k) th2[k] += sh * sigma[k];
        const double f1 = F(polar_point(rho, th)), f2 = F(polar_point(rho, th2));
        defect = std::max(defect, std::abs(f1 - f2));
        ref = std::max(ref, std::abs(f1));
    }
    r.symmetry_defect = defect / std::max(ref, 1e-300);

    // same quadrature as the extraction: the remainder then measures truncation, not quadrature error
    r.hamiltonian = [Fx, F0](const Eigen::VectorXd& w) { return Fx(w) - F0; };
    return r;
}

TorsionReport torsion_det(const BnfResult& r) {
    TorsionReport t;
    t.det = r.T.determinant();
    t.scale = std::pow(r.T.cwiseAbs().maxCoeff(), static_cast<double>(r.T.rows()));
    t.asymmetry = (r.T - r.T.transpose()).cwiseAbs().maxCoeff();
    return t;
}

RemainderFit remainder_scaling(const BnfResult& r, const std::vector<double>& eps_list, int directions, std::uint64_t seed) {
    if (eps_list.size() < 4) throw Error(Error::Kind::Domain, "remainder_scaling: need at least 4 radii");
    const double lo = *std::min_element(eps_list.begin(), eps_list.end());
    const double hi = *std::max_element(eps_list.begin(), eps_list.end());
    if (!(lo > 0 && hi >= 10 * lo * (1 - 1e-12))) throw Error(Error::Kind::Domain, "remainder_scaling: radii must span a decade");
    const int dim = static_cast<int>(r.Omega.size()) * 2;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<Eigen::VectorXd> dirs;
    for (int i = 0; i < directions; ++i) {
        Eigen::VectorXd v(dim);
        for (int k = 0; k < dim; ++k) v[k] = nd(rng);
        dirs.push_back(v.normalized());
    }
    RemainderFit fit;
    for (double e : eps_list) {
        double sup = 0;
        for (const auto& v : dirs) {
            const Eigen::VectorXd wb = e * v;
            sup = std::max(sup, std::abs(r.hamiltonian(r.transform(wb)) - r.normal_form_value(wb)));
        }
        fit.radii.push_back(e);
        fit.norms.push_back(sup);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(fit.radii.size());
    for (std::size_t i = 0; i < fit.radii.size(); ++i) {
        const double x = std::log(fit.radii[i]), y = std::log(std::max(fit.norms[i], 1e-300));
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

std::string to_json(const BnfResult& r, const RemainderFit* fit) {
    nlohmann::ordered_json j;
    j["Lambda"] = {r.Lambda1, r.Lambda2};
    j["s"] = r.s;
    j["ordering"] = "total degree in (pbar, qbar)";
    j["C0"] = r.C0;
    j["Omega"] = std::vector<double>(r.Omega.data(), r.Omega.data() + r.Omega.size());
    std::vector<std::vector<double>> T(r.T.rows(), std::vector<double>(r.T.cols()));
    for (int a = 0; a < r.T.rows(); ++a)
        for (int b = 0; b < r.T.cols(); ++b) T[a][b] = r.T(a, b);
    j["T"] = T;
    auto pj = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.Pj.size(); ++i) {
        auto coeffs = nlohmann::ordered_json::array();
        for (const auto& [a, c] : r.Pj[i]) coeffs.push_back({{"r_exponent", a}, {"coeff", c}});
        pj.push_back({{"degree", static_cast<int>(i) + 3}, {"coeffs", coeffs}});
    }
    j["Pj"] = pj;
    j["conjugation_residual"] = r.conjugation_residual;
    j["symmetry_defect"] = r.symmetry_defect;
    if (fit) j["remainder"] = {{"radii", fit->radii}, {"norms", fit->norms}, {"exponent", fit->exponent}};
    return j.dump(2);
}

}  // namespace tskam
