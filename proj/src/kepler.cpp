#include "tskam/kepler.hpp"

#include <boost/math/tools/roots.hpp>

#include <limits>

namespace tskam {

namespace {

const Vec3 k1(1, 0, 0), k3(0, 0, 1);

struct Orbit {
    double Lambda;  // m sqrt(M a)
    double d;       // Lambda - Gamma, kept separately for accuracy near e = 0
    Vec3 Chat, Phat;
    double ell;
};

void orbit_to_cartesian(const Orbit& o, double m, double M, Vec3& y, Vec3& x) {
    const double a = o.Lambda * o.Lambda / (m * m * M);
    const double dn = std::max(0.0, o.d);
    const double e = std::sqrt(std::max(0.0, dn * (2 * o.Lambda - dn))) / o.Lambda;
    const double sq = (o.Lambda - dn) / o.Lambda;  // sqrt(1 - e^2)
    const double u = kepler_solve(o.ell, e);
    const Vec3 Q = o.Chat.cross(o.Phat);
    const double cu = std::cos(u), su = std::sin(u);
    x = a * (cu - e) * o.Phat + a * sq * su * Q;
    const double f = std::sqrt(M / a) / (1 - e * cu);
    y = m * f * (-su * o.Phat + sq * cu * Q);
}

// fails for nonnegative two-body energy; Phat is left zero when e == 0
Orbit orbit_from_cartesian(const Vec3& y, const Vec3& x, double m, double M, double& e_out) {
    const double r = x.norm();
    const double h = y.squaredNorm() / (2 * m) - m * M / r;
    if (!(h < 0)) throw Error(Error::Kind::NotElliptic, "two-body energy is nonnegative");
    const double a = -m * M / (2 * h);
    const Vec3 v = y / m;
    const Vec3 c = x.cross(v);
    const Vec3 ev = v.cross(c) / M - x / r;
    const double e = ev.norm();
    if (!(e < 1)) throw Error(Error::Kind::NotElliptic, "eccentricity >= 1");
    Orbit o;
    o.Lambda = m * std::sqrt(M * a);
    o.d = o.Lambda * e * e / (1 + std::sqrt(1 - e * e));
    o.Chat = c.normalized();
    o.Phat = e > 0 ? Vec3(ev / e) : Vec3::Zero();
    if (e > 0) {
        const double cu = (1 - r / a), su = x.dot(v) / std::sqrt(M * a);  // e cos u, e sin u
        const double u = std::atan2(su, cu);
        o.ell = wrap_2pi(u - su);
    } else {
        o.ell = 0;
    }
    e_out = e;
    return o;
}

void require_node(const Vec3& n, double scale, const char* name) {
    if (!(n.norm() >= kNodeTol * scale))
        throw Error(Error::Kind::ChartSingularity, std::string("vanishing node ") + name);
}

Vec3 rotate_about(const Vec3& axis_hat, const Vec3& u_hat, double ang) {
    return std::cos(ang) * u_hat + std::sin(ang) * axis_hat.cross(u_hat);
}

// total angular momentum direction from (G, Z, zeta)
void c_frame(double G, double Z, double zeta, Vec3& Chat, Vec3& nu1hat) {
    const double ci = std::clamp(Z / G, -1.0, 1.0);
    const double si = std::sqrt(std::max(0.0, 1 - ci * ci));
    Chat = Vec3(si * std::sin(zeta), -si * std::cos(zeta), ci);
    nu1hat = Vec3(std::cos(zeta), std::sin(zeta), 0);
}

struct Gaps {
    double d1, d2, d3;  // Lambda1-Gamma1, Lambda2-Gamma2, G+Gamma2-Gamma1
};

CartesianState cartesian_from_jrd_gaps(const JrdCoords& j, const Gaps& gp, const MassParams& mp) {
    Vec3 Chat, nu1;
    c_frame(j.G, j.Z, j.zeta, Chat, nu1);
    const Vec3 nuh = rotate_about(Chat, nu1, j.gamma);
    const double G = j.G, G1 = j.Gamma1, G2 = j.Gamma2;
    const double a = (G * G + G1 * G1 - G2 * G2) / (2 * G);
    const double g1_minus_a = std::max(0.0, (G2 - G + G1) * gp.d3 / (2 * G));
    const double b = std::sqrt(g1_minus_a * (G1 + a));
    const Vec3 C = G * Chat;
    const Vec3 C1 = a * Chat + b * nuh.cross(Chat);
    const Vec3 C2 = C - C1;
    Orbit o1{j.Lambda1, gp.d1, C1.normalized(), Vec3::Zero(), j.ell1};
    Orbit o2{j.Lambda2, gp.d2, C2.normalized(), Vec3::Zero(), j.ell2};
    o1.Phat = rotate_about(o1.Chat, nuh, j.gamma1);
    o2.Phat = rotate_about(o2.Chat, nuh, j.gamma2);
    CartesianState s;
    orbit_to_cartesian(o1, mp.mred(1), mp.Mred(1), s.y1, s.x1);
    orbit_to_cartesian(o2, mp.mred(2), mp.Mred(2), s.y2, s.x2);
    return s;
}

JrdCoords jrd_from_cartesian_gaps(const CartesianState& s, const MassParams& mp, Gaps& gp) {
    double e1, e2;
    const Orbit o1 = orbit_from_cartesian(s.y1, s.x1, mp.mred(1), mp.Mred(1), e1);
    const Orbit o2 = orbit_from_cartesian(s.y2, s.x2, mp.mred(2), mp.Mred(2), e2);
    const Vec3 C1 = s.x1.cross(s.y1), C2 = s.x2.cross(s.y2), C = C1 + C2;
    const double G = C.norm();
    const Vec3 nu1 = k3.cross(C), nu = C.cross(C1);
    require_node(nu1, G, "nu1 = k3 x C");
    require_node(nu, G * C1.norm(), "nu = C x C1");
    if (!(e1 > 0 && e2 > 0)) throw Error(Error::Kind::ChartSingularity, "circular orbit: perihelion undefined");
    JrdCoords j;
    j.Lambda1 = o1.Lambda;
    j.Lambda2 = o2.Lambda;
    j.Gamma1 = C1.norm();
    j.Gamma2 = C2.norm();
    j.G = G;
    j.Z = C.dot(k3);
    j.ell1 = o1.ell;
    j.ell2 = o2.ell;
    j.gamma1 = oriented_angle(C1, nu, o1.Phat);
    j.gamma2 = oriented_angle(C2, nu, o2.Phat);
    j.gamma = oriented_angle(C, nu1, nu);
    j.zeta = oriented_angle(k3, k1, nu1);
    gp.d1 = o1.d;
    gp.d2 = o2.d;
    // G + Gamma2 - Gamma1 = 2(G Gamma2 + C.C2)/(G + Gamma2 + Gamma1), with G Gamma2 + C.C2 = G Gamma2 |Chat + C2hat|^2 / 2
    const double s2 = (C / G + C2 / j.Gamma2).squaredNorm();
    gp.d3 = G * j.Gamma2 * s2 / (G + j.Gamma2 + j.Gamma1);
    return j;
}

}  // namespace

double kepler_solve(double ell, double e) {
    if (!(e >= 0 && e < 1)) throw Error(Error::Kind::Domain, "kepler_solve: eccentricity outside [0,1)");
    if (e == 0) return ell;
    const double base = std::remainder(ell, kTwoPi);
    const double shift = ell - base;
    auto f = [&](double u) {
        return std::make_tuple(u - e * std::sin(u) - base, 1 - e * std::cos(u), e * std::sin(u));
    };
    double guess = base + e * std::sin(base) / (1 - e * std::cos(base) + 1e-300);
    guess = std::clamp(guess, base - e, base + e);
    std::uintmax_t it = 100;
    double u = boost::math::tools::halley_iterate(f, guess, base - e, base + e, std::numeric_limits<double>::digits, it);
    return u + shift;
}

double oriented_angle(const Vec3& w, const Vec3& u, const Vec3& v) {
    return std::atan2(w.normalized().dot(u.cross(v)), u.dot(v));
}

Phase12 CartesianState::phase() const {
    Phase12 z;
    z << y1, y2, x1, x2;
    return z;
}

CartesianState CartesianState::from_phase(const Phase12& z) {
    return {z.segment<3>(0), z.segment<3>(3), z.segment<3>(6), z.segment<3>(9)};
}

Phase12 JrdCoords::phase() const {
    Phase12 z;
    z << Lambda1, Lambda2, Gamma1, Gamma2, G, Z, ell1, ell2, gamma1, gamma2, gamma, zeta;
    return z;
}
JrdCoords JrdCoords::from_phase(const Phase12& z) {
    return {z[0], z[1], z[2], z[3], z[4], z[5], z[6], z[7], z[8], z[9], z[10], z[11]};
}

Phase12 RpsCoords::phase() const {
    Phase12 z;
    z << Lambda1, Lambda2, eta1, eta2, p, Z, lambda1, lambda2, xi1, xi2, q, zeta;
    return z;
}
RpsCoords RpsCoords::from_phase(const Phase12& z) {
    return {z[0], z[1], z[2], z[3], z[4], z[5], z[6], z[7], z[8], z[9], z[10], z[11]};
}
Eigen::Matrix<double, 6, 1> RpsCoords::z() const {
    Eigen::Matrix<double, 6, 1> v;
    v << eta1, eta2, xi1, xi2, p, q;
    return v;
}

Phase12 PeriheliaCoords::phase() const {
    Phase12 z;
    z << Lambda1, Lambda2, Gamma2, Theta, G, Z, ell1, ell2, g2, vartheta, g, zeta;
    return z;
}
PeriheliaCoords PeriheliaCoords::from_phase(const Phase12& z) {
    return {z[0], z[1], z[2], z[3], z[4], z[5], z[6], z[7], z[8], z[9], z[10], z[11]};
}

void cartesian_from_elements(const KeplerElements& el, double m, double M, Vec3& y, Vec3& x) {
    if (!(el.a > 0)) throw Error(Error::Kind::NotElliptic, "semi-major axis must be positive");
    if (!(el.e >= 0 && el.e < 1)) throw Error(Error::Kind::NotElliptic, "eccentricity outside [0,1)");
    Vec3 Chat, node;
    c_frame(1.0, std::cos(el.inc), el.Omega, Chat, node);
    Orbit o;
    o.Lambda = m * std::sqrt(M * el.a);
    o.d = o.Lambda * el.e * el.e / (1 + std::sqrt(1 - el.e * el.e));
    o.Chat = Chat;
    o.Phat = rotate_about(Chat, node, el.omega);
    o.ell = el.M;
    orbit_to_cartesian(o, m, M, y, x);
}

KeplerElements elements_from_cartesian(const Vec3& y, const Vec3& x, double m, double M) {
    double e;
    Orbit o = orbit_from_cartesian(y, x, m, M, e);
    KeplerElements el;
    el.a = o.Lambda * o.Lambda / (m * m * M);
    el.e = e;
    el.inc = std::acos(std::clamp(o.Chat.z(), -1.0, 1.0));
    const Vec3 node = k3.cross(o.Chat);
    el.Omega = wrap_2pi(std::atan2(node.y(), node.x()));
    el.omega = e > 0 ? wrap_2pi(oriented_angle(o.Chat, node, o.Phat)) : 0.0;
    el.M = o.ell;
    return el;
}

KeplerOrbit kepler_orbit(const Vec3& y, const Vec3& x, double m, double M) {
    double e;
    const Orbit o = orbit_from_cartesian(y, x, m, M, e);
    KeplerOrbit k;
    k.m = m;
    k.M = M;
    k.a = o.Lambda * o.Lambda / (m * m * M);
    k.e = e;
    if (e > 1e-14) {
        k.P = o.Phat;
        k.ell0 = o.ell;
    } else {
        k.e = 0;
        k.P = x.normalized();
        k.ell0 = 0;
    }
    k.Q = o.Chat.cross(k.P);
    return k;
}

Vec3 KeplerOrbit::position_ecc(double u) const {
    const double sq = std::sqrt((1 - e) * (1 + e));
    return a * (std::cos(u) - e) * P + a * sq * std::sin(u) * Q;
}

Vec3 KeplerOrbit::momentum_ecc(double u) const {
    const double sq = std::sqrt((1 - e) * (1 + e));
    const double f = std::sqrt(M / a) / (1 - e * std::cos(u));
    return m * f * (-std::sin(u) * P + sq * std::cos(u) * Q);
}

Vec3 KeplerOrbit::position(double ell) const { return position_ecc(kepler_solve(ell, e)); }
Vec3 KeplerOrbit::momentum(double ell) const { return momentum_ecc(kepler_solve(ell, e)); }

JrdCoords jrd_from_cartesian(const CartesianState& s, const MassParams& mp) {
    Gaps gp;
    return jrd_from_cartesian_gaps(s, mp, gp);
}

CartesianState cartesian_from_jrd(const JrdCoords& j, const MassParams& mp) {
    if (!(j.Gamma1 > 0 && j.Gamma1 <= j.Lambda1 && j.Gamma2 > 0 && j.Gamma2 <= j.Lambda2))
        throw Error(Error::Kind::Domain, "jrd: need 0 < Gamma_i <= Lambda_i");
    if (!(std::abs(j.Z) <= j.G)) throw Error(Error::Kind::Domain, "jrd: need |Z| <= G");
    Gaps gp{j.Lambda1 - j.Gamma1, j.Lambda2 - j.Gamma2, j.G + j.Gamma2 - j.Gamma1};
    return cartesian_from_jrd_gaps(j, gp, mp);
}

RpsCoords rps_from_jrd(const JrdCoords& j) {
    const double r1 = j.Lambda1 - j.Gamma1, r2 = j.Lambda2 - j.Gamma2, r3 = j.G + j.Gamma2 - j.Gamma1;
    if (!(r1 >= 0 && r2 >= 0 && r3 >= 0)) throw Error(Error::Kind::Domain, "rps: negative radicand");
    RpsCoords r;
    r.Lambda1 = j.Lambda1;
    r.Lambda2 = j.Lambda2;
    r.lambda1 = wrap_2pi(j.ell1 + j.gamma1 + j.gamma);
    r.lambda2 = wrap_2pi(j.ell2 + j.gamma2 - j.gamma);
    const double A1 = std::sqrt(2 * r1), A2 = std::sqrt(2 * r2), A3 = std::sqrt(2 * r3);
    r.eta1 = A1 * std::cos(-(j.gamma1 + j.gamma));
    r.xi1 = A1 * std::sin(-(j.gamma1 + j.gamma));
    r.eta2 = -A2 * std::cos(j.gamma - j.gamma2);
    r.xi2 = -A2 * std::sin(j.gamma - j.gamma2);
    r.p = -A3 * std::cos(j.gamma);
    r.q = -A3 * std::sin(j.gamma);
    r.Z = j.Z;
    r.zeta = j.zeta;
    return r;
}

namespace {

JrdCoords jrd_from_rps_gaps(const RpsCoords& r, Gaps& gp) {
    gp.d1 = 0.5 * (r.eta1 * r.eta1 + r.xi1 * r.xi1);
    gp.d2 = 0.5 * (r.eta2 * r.eta2 + r.xi2 * r.xi2);
    gp.d3 = 0.5 * (r.p * r.p + r.q * r.q);
    JrdCoords j;
    j.Lambda1 = r.Lambda1;
    j.Lambda2 = r.Lambda2;
    j.Gamma1 = r.Lambda1 - gp.d1;
    j.Gamma2 = r.Lambda2 - gp.d2;
    j.G = g_rps(r);
    j.Z = r.Z;
    j.zeta = r.zeta;
    // arguments default to 0 at a vanishing radius; any choice is consistent there
    j.gamma = std::atan2(-r.q, -r.p);
    j.gamma1 = -std::atan2(r.xi1, r.eta1) - j.gamma;
    j.gamma2 = j.gamma - std::atan2(-r.xi2, -r.eta2);
    j.ell1 = wrap_2pi(r.lambda1 - j.gamma1 - j.gamma);
    j.ell2 = wrap_2pi(r.lambda2 - j.gamma2 + j.gamma);
    j.gamma1 = wrap_pi(j.gamma1);
    j.gamma2 = wrap_pi(j.gamma2);
    if (!(j.Gamma1 > 0 && j.Gamma2 > 0 && j.G > 0)) throw Error(Error::Kind::Domain, "rps: outside chart");
    return j;
}

}  // namespace

JrdCoords jrd_from_rps(const RpsCoords& r) {
    Gaps gp;
    return jrd_from_rps_gaps(r, gp);
}

RpsCoords rps_from_cartesian(const CartesianState& s, const MassParams& mp) {
    Gaps gp;
    JrdCoords j = jrd_from_cartesian_gaps(s, mp, gp);
    RpsCoords r = rps_from_jrd(j);
    // same angles, radii from the cancellation-free gaps
    auto rescale = [](double& u, double& v, double d) {
        double n = std::hypot(u, v), t = std::sqrt(2 * d);
        if (n > 0) u *= t / n, v *= t / n;
    };
    rescale(r.eta1, r.xi1, gp.d1);
    rescale(r.eta2, r.xi2, gp.d2);
    rescale(r.p, r.q, gp.d3);
    return r;
}

CartesianState cartesian_from_rps(const RpsCoords& r, const MassParams& mp) {
    Gaps gp;
    JrdCoords j = jrd_from_rps_gaps(r, gp);
    return cartesian_from_jrd_gaps(j, gp, mp);
}

double g_rps(const RpsCoords& r) {
    return r.Lambda1 - r.Lambda2 - 0.5 * (r.eta1 * r.eta1 + r.xi1 * r.xi1) + 0.5 * (r.eta2 * r.eta2 + r.xi2 * r.xi2) +
           0.5 * (r.p * r.p + r.q * r.q);
}

PeriheliaCoords perihelia_from_cartesian(const CartesianState& s, const MassParams& mp) {
    double e1, e2;
    const Orbit o1 = orbit_from_cartesian(s.y1, s.x1, mp.mred(1), mp.Mred(1), e1);
    const Orbit o2 = orbit_from_cartesian(s.y2, s.x2, mp.mred(2), mp.Mred(2), e2);
    if (!(e1 > 0 && e2 > 0)) throw Error(Error::Kind::ChartSingularity, "circular orbit: perihelion undefined");
    const Vec3 C1 = s.x1.cross(s.y1), C2 = s.x2.cross(s.y2), C = C1 + C2;
    const double G = C.norm(), G2 = C2.norm();
    const Vec3 &P1 = o1.Phat, &P2 = o2.Phat;
    const Vec3 nu1 = k3.cross(C), n1 = C.cross(P1), nu2 = P1.cross(C2), n2 = C2.cross(P2);
    require_node(nu1, G, "nu1 = k3 x C");
    require_node(n1, G, "n1 = C x P1");
    require_node(nu2, G2, "nu2 = P1 x C2");
    require_node(n2, G2, "n2 = C2 x P2");
    PeriheliaCoords p;
    p.Lambda1 = o1.Lambda;
    p.Lambda2 = o2.Lambda;
    p.Gamma2 = G2;
    p.Theta = C2.dot(P1);
    p.G = G;
    p.Z = C.dot(k3);
    p.ell1 = o1.ell;
    p.ell2 = o2.ell;
    p.g2 = oriented_angle(C2, nu2, n2);
    p.vartheta = oriented_angle(P1, n1, nu2);
    p.g = oriented_angle(C, nu1, n1);
    p.zeta = oriented_angle(k3, k1, nu1);
    return p;
}

CartesianState cartesian_from_perihelia(const PeriheliaCoords& p, const MassParams& mp) {
    if (!(std::abs(p.Theta) < std::min(p.G, p.Gamma2))) throw Error(Error::Kind::Domain, "perihelia: need |Theta| < min(G, Gamma2)");
    Vec3 Chat, nu1;
    c_frame(p.G, p.Z, p.zeta, Chat, nu1);
    const Vec3 C = p.G * Chat;
    const Vec3 n1 = rotate_about(Chat, nu1, p.g);
    const double t = p.Theta / p.G;
    const Vec3 P1 = t * Chat + std::sqrt((1 - t) * (1 + t)) * n1.cross(Chat);
    const Vec3 nu2 = rotate_about(P1, n1, p.vartheta);
    const Vec3 C2 = p.Theta * P1 + std::sqrt((p.Gamma2 - p.Theta) * (p.Gamma2 + p.Theta)) * nu2.cross(P1);
    const Vec3 C1 = C - C2;
    const double G1 = C1.norm();
    if (!(G1 <= p.Lambda1)) throw Error(Error::Kind::Domain, "perihelia: Gamma1 exceeds Lambda1");
    if (!(p.Gamma2 <= p.Lambda2)) throw Error(Error::Kind::Domain, "perihelia: Gamma2 exceeds Lambda2");
    const Vec3 C2hat = C2 / p.Gamma2;
    const Vec3 n2 = rotate_about(C2hat, nu2, p.g2);
    const Vec3 P2 = n2.cross(C2hat);
    Orbit o1{p.Lambda1, p.Lambda1 - G1, C1 / G1, P1, p.ell1};
    Orbit o2{p.Lambda2, p.Lambda2 - p.Gamma2, C2hat, P2, p.ell2};
    CartesianState s;
    orbit_to_cartesian(o1, mp.mred(1), mp.Mred(1), s.y1, s.x1);
    orbit_to_cartesian(o2, mp.mred(2), mp.Mred(2), s.y2, s.x2);
    return s;
}

double gamma1_from_perihelia(double G, double G2, double Th, double vt) {
    const double a = G * G - Th * Th, b = G2 * G2 - Th * Th;
    if (!(a >= 0 && b >= 0)) throw Error(Error::Kind::Domain, "gamma1_from_perihelia: |Theta| exceeds min(G, G2)");
    const double r = G * G + G2 * G2 - 2 * Th * Th + 2 * std::sqrt(a) * std::sqrt(b) * std::cos(vt);
    if (!(r >= 0)) throw Error(Error::Kind::Domain, "gamma1_from_perihelia: negative radicand");
    return std::sqrt(r);
}

double kepler_part(double L1, double L2, const MassParams& mp) {
    auto h = [&](int i, double L) {
        const double m = mp.mred(i), M = mp.Mred(i);
        return -m * m * m * M * M / (2 * L * L);
    };
    return h(1, L1) + h(2, L2);
}

double kepler_frequency(int i, double L, const MassParams& mp) {
    const double m = mp.mred(i), M = mp.Mred(i);
    return m * m * m * M * M / (L * L * L);
}

double lambda_from_a(int i, double a, const MassParams& mp) { return mp.mred(i) * std::sqrt(mp.Mred(i) * a); }

double a_from_lambda(int i, double L, const MassParams& mp) {
    const double m = mp.mred(i);
    return L * L / (m * m * mp.Mred(i));
}

double hamiltonian(const CartesianState& s, const MassParams& mp) {
    const Vec3 d = s.x1 - s.x2;
    if (!(d.norm() > 0 && s.x1.norm() > 0 && s.x2.norm() > 0)) throw Error(Error::Kind::Collision, "collision");
    double h = 0;
    const Vec3* ys[2] = {&s.y1, &s.y2};
    const Vec3* xs[2] = {&s.x1, &s.x2};
    for (int i = 0; i < 2; ++i) {
        const double m = mp.mred(i + 1), M = mp.Mred(i + 1);
        h += ys[i]->squaredNorm() / (2 * m) - m * M / xs[i]->norm();
    }
    h += mp.mu * (-mp.m1 * mp.m2 / d.norm() + s.y1.dot(s.y2) / mp.m0);
    return h;
}

double hamiltonian(const JrdCoords& c, const MassParams& mp) { return hamiltonian(cartesian_from_jrd(c, mp), mp); }
double hamiltonian(const RpsCoords& c, const MassParams& mp) { return hamiltonian(cartesian_from_rps(c, mp), mp); }
double hamiltonian(const PeriheliaCoords& c, const MassParams& mp) {
    return hamiltonian(cartesian_from_perihelia(c, mp), mp);
}

Eigen::Matrix<double, 12, 12> standard_omega() {
    Eigen::Matrix<double, 12, 12> O = Eigen::Matrix<double, 12, 12>::Zero();
    O.block<6, 6>(0, 6) = Eigen::Matrix<double, 6, 6>::Identity();
    O.block<6, 6>(6, 0) = -Eigen::Matrix<double, 6, 6>::Identity();
    return O;
}

}  // namespace tskam
