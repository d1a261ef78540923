#include "tskam/averaging.hpp"

#include "json.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>

namespace tskam {

namespace {

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

// 1/|x1-x2| - 1/|x2| - x1.x2/|x2|^3 without cancelling the O(1) parts against each other
double remainder_term(const Vec3& x1, const Vec3& x2) {
    const double r12 = (x1 - x2).norm(), r2 = x2.norm();
    if (!(r12 > 1e-12 * r2)) throw Error(Error::Kind::Collision, "collision on the averaging grid");
    const double dot = x1.dot(x2);
    const double inv_diff = (2 * dot - x1.squaredNorm()) / (r12 * r2 * (r2 + r12));
    return inv_diff - dot / (r2 * r2 * r2);
}

struct Samples {
    std::vector<Vec3> x, y;
    std::vector<double> w;
};

Samples sample_orbit(const KeplerOrbit& o, int N) {
    Samples s;
    for (int i = 0; i < N; ++i) {
        const double u = kTwoPi * i / N;
        s.x.push_back(o.position_ecc(u));
        s.y.push_back(o.momentum_ecc(u));
        s.w.push_back(1 - o.e * std::cos(u));
    }
    return s;
}

// <R> and <y1.y2>
std::pair<double, double> orbit_averages(const KeplerOrbit& o1, const KeplerOrbit& o2, double kappa, int N) {
    const Samples s1 = sample_orbit(o1, N), s2 = sample_orbit(o2, N);
    std::vector<double> rows_r(N), rows_y(N), row_r(N), row_y(N);
    for (int i = 0; i < N; ++i) {
        const Vec3 x1 = kappa * s1.x[i];
        for (int j = 0; j < N; ++j) {
            row_r[j] = s2.w[j] * remainder_term(x1, s2.x[j]);
            row_y[j] = s2.w[j] * s1.y[i].dot(s2.y[j]);
        }
        rows_r[i] = s1.w[i] * pairwise_sum(row_r.data(), N);
        rows_y[i] = s1.w[i] * pairwise_sum(row_y.data(), N);
    }
    const double nn = static_cast<double>(N) * N;
    return {pairwise_sum(rows_r.data(), N) / nn, pairwise_sum(rows_y.data(), N) / nn};
}

void orbits_of(const CartesianState& s, const MassParams& mp, KeplerOrbit& o1, KeplerOrbit& o2) {
    o1 = kepler_orbit(s.y1, s.x1, mp.mred(1), mp.Mred(1));
    o2 = kepler_orbit(s.y2, s.x2, mp.mred(2), mp.Mred(2));
    if (!(o1.a < o2.a)) throw Error(Error::Kind::Domain, "averaging: inner semi-major axis must be the smaller");
}

struct FdResult {
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

// centred differences, tensor-product stencils for mixed partials
FdResult fd_derivatives(const std::function<double(const Eigen::VectorXd&)>& F, const Eigen::VectorXd& x0,
                        const Eigen::VectorXd& h, int order) {
    const int n = static_cast<int>(x0.size());
    std::vector<int> off;
    std::vector<double> c1, c2;  // first- and second-derivative weights
    if (order == 4) {
        off = {-2, -1, 0, 1, 2};
        c1 = {1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12};
        c2 = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
    } else {
        off = {-1, 0, 1};
        c1 = {-0.5, 0, 0.5};
        c2 = {1, -2, 1};
    }
    const double f0 = F(x0);
    FdResult r{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
    for (int i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < off.size(); ++a) {
            if (off[a] == 0) {
                r.hess(i, i) += c2[a] * f0;
                continue;
            }
            Eigen::VectorXd x = x0;
            x[i] += off[a] * h[i];
            const double f = F(x);
            r.grad[i] += c1[a] * f;
            r.hess(i, i) += c2[a] * f;
        }
        r.grad[i] /= h[i];
        r.hess(i, i) /= h[i] * h[i];
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0;
            for (std::size_t a = 0; a < off.size(); ++a)
                for (std::size_t b = 0; b < off.size(); ++b) {
                    if (off[a] == 0 || off[b] == 0) continue;
                    Eigen::VectorXd x = x0;
                    x[i] += off[a] * h[i];
                    x[j] += off[b] * h[j];
                    s += c1[a] * c1[b] * F(x);
                }
            r.hess(i, j) = r.hess(j, i) = s / (h[i] * h[j]);
        }
    return r;
}

void fill_common(EquilibriumReport& rep, const FdResult& fd, const Eigen::VectorXd& scale) {
    rep.gradient.assign(fd.grad.data(), fd.grad.data() + fd.grad.size());
    rep.gradient_norm = fd.grad.norm();
    rep.hessian = fd.hess;
    const Eigen::VectorXd gnd = fd.grad.cwiseProduct(scale);
    const Eigen::MatrixXd hnd = scale.asDiagonal() * fd.hess * scale.asDiagonal();
    rep.hessian_scale = fd.hess.cwiseAbs().maxCoeff();
    rep.gradient_ratio = gnd.norm() / hnd.cwiseAbs().maxCoeff();
}

Eigen::MatrixXd symplectic_J(int d) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    J.block(0, d, d, d) = -Eigen::MatrixXd::Identity(d, d);
    J.block(d, 0, d, d) = Eigen::MatrixXd::Identity(d, d);
    return J;
}

std::vector<std::complex<double>> flow_eigenvalues(const Eigen::MatrixXd& H, double mu) {
    const int d = static_cast<int>(H.rows()) / 2;
    const Eigen::MatrixXd Hs = 0.5 * (H + H.transpose());
    Eigen::EigenSolver<Eigen::MatrixXd> es(mu * symplectic_J(d) * Hs);
    std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + 2 * d);
    std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
        return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
    });
    return ev;
}

double mu_eff(const MassParams& mp) { return mp.mu > 0 ? mp.mu : 1.0; }

}  // namespace

void validate(const QuadratureConfig& c) {
    if (c.N < 8 || c.N % 2) throw Error(Error::Kind::Config, "quadrature: N must be even and >= 8");
    if (c.stencil_order != 2 && c.stencil_order != 4) throw Error(Error::Kind::Config, "quadrature: stencil_order must be 2 or 4");
    if (!(c.step_rel > 0 && c.step_rel < 0.1)) throw Error(Error::Kind::Config, "quadrature: step_rel outside (0, 0.1)");
    if (!(c.alpha0 > 0 && c.alpha0 < 0.5)) throw Error(Error::Kind::Config, "quadrature: alpha0 outside (0, 0.5)");
    if (!(c.fit_tol > 0 && c.eig_tol > 0 && c.grad_tol > 0)) throw Error(Error::Kind::Config, "quadrature: tolerances must be positive");
}

double average_fast_angles(const std::function<double(double, double)>& g, int N) {
    if (N < 1) throw Error(Error::Kind::Config, "average: N < 1");
    std::vector<double> rows(N), row(N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) row[j] = g(kTwoPi * i / N, kTwoPi * j / N);
        rows[i] = pairwise_sum(row.data(), N);
    }
    return pairwise_sum(rows.data(), N) / (static_cast<double>(N) * N);
}

double scaled_remainder(const KeplerOrbit& o1, const KeplerOrbit& o2, double kappa, int N) {
    return orbit_averages(o1, o2, kappa, N).first;
}

double secular_part(const CartesianState& s, const MassParams& mp, int N) {
    KeplerOrbit o1, o2;
    orbits_of(s, mp, o1, o2);
    const auto [R, yy] = orbit_averages(o1, o2, 1.0, N);
    return -mp.m1 * mp.m2 * R + yy / mp.m0;
}

double average_perturbation(const CartesianState& s, const MassParams& mp, int N) {
    KeplerOrbit o1, o2;
    orbits_of(s, mp, o1, o2);
    const auto [R, yy] = orbit_averages(o1, o2, 1.0, N);
    return -mp.m1 * mp.m2 * (1.0 / o2.a + R) + yy / mp.m0;
}

double average_fast_angles(const RpsCoords& r, const MassParams& mp, const QuadratureConfig& cfg) {
    validate(cfg);
    return average_perturbation(cartesian_from_rps(r, mp), mp, cfg.N);
}
double average_fast_angles(const PeriheliaCoords& p, const MassParams& mp, const QuadratureConfig& cfg) {
    validate(cfg);
    return average_perturbation(cartesian_from_perihelia(p, mp), mp, cfg.N);
}
double average_fast_angles(const JrdCoords& j, const MassParams& mp, const QuadratureConfig& cfg) {
    validate(cfg);
    return average_perturbation(cartesian_from_jrd(j, mp), mp, cfg.N);
}

QuadrupoleReport quadrupole_P(const KeplerOrbit& o1, const KeplerOrbit& o2, const QuadratureConfig& cfg) {
    validate(cfg);
    QuadrupoleReport rep;
    std::array<double, 4> g{};
    for (int j = 0; j < 4; ++j) {
        const double al = cfg.alpha0 / std::pow(2.0, j);
        rep.alphas.push_back(al);
        g[j] = o2.a * scaled_remainder(o1, o2, al * o2.a / o1.a, cfg.N) / (al * al);
    }
    // g(alpha) = P + c1 alpha + c2 alpha^2 through three points; value at alpha = 0
    auto fit = [&](int j0) {
        Eigen::Matrix3d V;
        Eigen::Vector3d b;
        for (int r = 0; r < 3; ++r) {
            const double al = rep.alphas[j0 + r] / cfg.alpha0;
            V.row(r) << 1, al, al * al;
            b[r] = g[j0 + r];
        }
        return V.fullPivLu().solve(b)[0];
    };
    rep.P = fit(0);
    const double P2 = fit(1);
    rep.residual = std::abs(rep.P - P2) / std::max(std::abs(rep.P), 1e-300);
    if (cfg.strict && !(rep.residual <= cfg.fit_tol))
        throw Error(Error::Kind::Numerical, "quadrupole fit unreliable: residual " + std::to_string(rep.residual));
    return rep;
}

PeriheliaCoords perihelia_point(double L1, double L2, double G2, double Theta, double vartheta, double G) {
    return {L1, L2, G2, Theta, G, G * std::cos(0.4), 0.0, 0.0, 0.7, vartheta, 0.3, 0.2};
}

QuadrupoleReport quadrupole_P(double L1, double L2, double G2, double Theta, double vartheta, double G,
                              const MassParams& mp, const QuadratureConfig& cfg) {
    const CartesianState s = cartesian_from_perihelia(perihelia_point(L1, L2, G2, Theta, vartheta, G), mp);
    KeplerOrbit o1, o2;
    orbits_of(s, mp, o1, o2);
    return quadrupole_P(o1, o2, cfg);
}

double quadrupole_closed_form(const KeplerOrbit& o1, const KeplerOrbit& o2) {
    const Vec3 C1 = o1.P.cross(o1.Q), C2 = o2.P.cross(o2.Q);
    const double ci = std::clamp(C1.dot(C2), -1.0, 1.0);
    const double si2 = 1 - ci * ci;
    const double e1 = o1.e, e2 = o2.e;
    const double pc = o1.P.dot(C2);  // sin(i) sin(omega1)
    const double br = 2 + 3 * e1 * e1 - 3 * si2 * (1 - e1 * e1) - 15 * e1 * e1 * pc * pc;
    return br / (8 * std::pow(1 - e2 * e2, 1.5));
}

EquilibriumReport elliptic_equilibrium_check(double L1, double L2, const MassParams& mp, const QuadratureConfig& cfg) {
    validate(cfg);
    if (!(L1 > L2 && L2 > 0)) throw Error(Error::Kind::Domain, "elliptic check: need Lambda1 > Lambda2 > 0");
    const double G0 = L1 - L2;
    const RpsCoords base{L1, L2, 0, 0, 0, G0 * std::cos(0.4), 0, 0, 0, 0, 0, 0.2};
    auto at = [&](const Eigen::VectorXd& v, int N) {
        RpsCoords r = base;
        r.eta1 = v[0], r.eta2 = v[1], r.p = v[2], r.xi1 = v[3], r.xi2 = v[4], r.q = v[5];
        return secular_part(cartesian_from_rps(r, mp), mp, N);
    };
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(6);
    const Eigen::VectorXd scale = Eigen::VectorXd::Constant(6, std::sqrt(L2));
    const FdResult fd = fd_derivatives([&](const Eigen::VectorXd& v) { return at(v, cfg.N); }, x0,
                                       cfg.step_rel * scale, cfg.stencil_order);
    EquilibriumReport rep;
    rep.chart = "rps";
    rep.point = {L1, L2, 0, 0, 0, 0, 0, 0};
    rep.N = cfg.N;
    const double fN = at(x0, cfg.N), fh = at(x0, cfg.N / 2);
    rep.quadrature_residual = std::abs(fN - fh) / std::max(std::abs(fN), 1e-300);
    fill_common(rep, fd, scale);
    rep.eigenvalues = flow_eigenvalues(fd.hess, mu_eff(mp));
    double mx = 0, re = 0;
    for (auto z : rep.eigenvalues) mx = std::max(mx, std::abs(z)), re = std::max(re, std::abs(z.real()));
    rep.classification = re <= cfg.eig_tol * mx ? "elliptic" : "mixed";
    for (auto z : rep.eigenvalues)
        if (z.imag() > 0) rep.rates.push_back(z.imag());
    rep.equilibrium = rep.gradient_ratio < cfg.grad_tol;
    if (cfg.strict && !rep.equilibrium)
        throw Error(Error::Kind::Numerical, "z = 0 is not an equilibrium at the requested precision");
    if (cfg.strict && rep.classification != "elliptic")
        throw Error(Error::Kind::Numerical, "linearisation at z = 0 is not elliptic");
    return rep;
}

EquilibriumReport hyperbolic_equilibrium_check(double L1, double L2, double G2, const DomainSpec& spec,
                                               const QuadratureConfig& cfg) {
    validate(cfg);
    const double G = spec.G;
    const MassParams& mp = spec.masses;
    if (!in_Ap(L1, L2, G2, spec)) throw Error(Error::Kind::Domain, "hyperbolic check: (Lambda1, Lambda2, Gamma2) not in A_p");
    if (!(G + G2 < L1)) throw Error(Error::Kind::Domain, "hyperbolic check: Gamma1 = G + Gamma2 exceeds Lambda1");
    QuadratureConfig q = cfg;
    q.strict = false;
    auto P_at = [&](const Eigen::VectorXd& v) { return quadrupole_P(L1, L2, G2, v[0], v[1], G, mp, q).P; };
    auto S_at = [&](const Eigen::VectorXd& v) {
        return secular_part(cartesian_from_perihelia(perihelia_point(L1, L2, G2, v[0], v[1], G), mp), mp, cfg.N);
    };
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd scale(2);
    scale << G, 1.0;
    const FdResult fdP = fd_derivatives(P_at, x0, cfg.step_rel * scale, cfg.stencil_order);
    const FdResult fdS = fd_derivatives(S_at, x0, cfg.step_rel * scale, cfg.stencil_order);
    EquilibriumReport rep;
    rep.chart = "perihelia";
    rep.point = {L1, L2, G2, 0, G, 0};
    rep.N = cfg.N;
    const QuadrupoleReport p0 = quadrupole_P(L1, L2, G2, 0, 0, G, mp, q);
    QuadratureConfig qh = q;
    qh.N = cfg.N / 2;
    const double ph = quadrupole_P(L1, L2, G2, 0, 0, G, mp, qh).P;
    rep.quadrature_residual = std::abs(p0.P - ph) / std::max(std::abs(p0.P), 1e-300);
    fill_common(rep, fdP, scale);
    const double detP = fdP.hess.determinant();
    rep.rate_P = detP < 0 ? std::sqrt(-detP) : 0.0;
    rep.eigenvalues = flow_eigenvalues(fdS.hess, mu_eff(mp));
    double mx = 0, im = 0;
    for (auto z : rep.eigenvalues) mx = std::max(mx, std::abs(z)), im = std::max(im, std::abs(z.imag()));
    const bool realpair = detP < 0 && im <= cfg.eig_tol * mx && rep.eigenvalues.front().real() * rep.eigenvalues.back().real() < 0;
    rep.classification = realpair ? "hyperbolic" : "mixed";
    if (realpair) rep.rates.push_back(std::abs(rep.eigenvalues.back().real()));
    rep.equilibrium = rep.gradient_ratio < cfg.grad_tol;
    if (cfg.strict && !rep.equilibrium)
        throw Error(Error::Kind::Numerical, "(Theta, vartheta) = 0 is not an equilibrium at the requested precision");
    if (cfg.strict && !realpair) throw Error(Error::Kind::Numerical, "transverse linearisation is not a real pair");
    return rep;
}

bool sample_Ap_physical(const DomainSpec& spec, std::mt19937_64& rng, double& L1, double& L2, double& G2, int max_tries) {
    const KPair k = k_pm(spec);
    const double G = spec.G;
    std::uniform_real_distribution<double> U(0, 1);
    const double lo2 = std::max(spec.Lambda_minus, G), hi2 = spec.Lambda_plus;
    for (int t = 0; t < max_tries; ++t) {
        const double l2 = lo2 + (hi2 - lo2) * U(rng);
        const double l1 = l2 * (k.minus + (k.plus - k.minus) * U(rng));
        const double g2 = G + (l2 - G) * U(rng);
        if (in_Ap(l1, l2, g2, spec) && G + g2 < l1 * (1 - 1e-3)) {
            L1 = l1, L2 = l2, G2 = g2;
            return true;
        }
    }
    return false;
}

std::string to_json(const EquilibriumReport& r) {
    nlohmann::ordered_json j;
    j["chart"] = r.chart;
    j["point"] = r.point;
    j["gradient_norm"] = r.gradient_norm;
    j["gradient_ratio"] = r.gradient_ratio;
    std::vector<std::vector<double>> H(r.hessian.rows(), std::vector<double>(r.hessian.cols()));
    for (int i = 0; i < r.hessian.rows(); ++i)
        for (int k = 0; k < r.hessian.cols(); ++k) H[i][k] = r.hessian(i, k);
    j["hessian"] = H;
    auto ev = nlohmann::ordered_json::array();
    for (auto z : r.eigenvalues) ev.push_back({z.real(), z.imag()});
    j["eigenvalues"] = ev;
    j["classification"] = r.classification;
    j["rates"] = r.rates;
    if (r.chart == "perihelia") j["rate_P"] = r.rate_P;
    j["quadrature"] = {{"N", r.N}, {"residual", r.quadrature_residual}};
    j["equilibrium"] = r.equilibrium;
    return j.dump(2);
}

}  // namespace tskam
