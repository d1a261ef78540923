#pragma once

// Two-planet charts. Frame (k1, k2, k3) is the standard basis of R^3.
// Phase vectors put momenta first: (p_1..p_6, q_1..q_6) with omega = sum dp_i ^ dq_i.

#include "tskam/common.hpp"

#include <array>
#include <optional>
#include <string>

namespace tskam {

using Phase12 = Eigen::Matrix<double, 12, 1>;

double kepler_solve(double ell, double e);

// alpha_w(u, v): angle from u to v, counterclockwise about w; u, v orthogonal to w
double oriented_angle(const Vec3& w, const Vec3& u, const Vec3& v);

struct CartesianState {
    Vec3 y1, y2, x1, x2;
    Phase12 phase() const;
    static CartesianState from_phase(const Phase12& z);
};

struct KeplerElements {
    double a, e, inc, Omega, omega, M;  // M: mean anomaly
};

// single two-body problem with reduced mass m and attracting mass M
void cartesian_from_elements(const KeplerElements& el, double m, double M, Vec3& y, Vec3& x);
KeplerElements elements_from_cartesian(const Vec3& y, const Vec3& x, double m, double M);

// Keplerian ellipse through one state; at e = 0 the perihelion is put along x
struct KeplerOrbit {
    double a = 0, e = 0, m = 1, M = 1, ell0 = 0;  // ell0: mean anomaly of the defining state
    Vec3 P, Q;
    Vec3 position(double ell) const;
    Vec3 momentum(double ell) const;
    // same, parametrised by the eccentric anomaly; d ell = (1 - e cos u) du
    Vec3 position_ecc(double u) const;
    Vec3 momentum_ecc(double u) const;
};
KeplerOrbit kepler_orbit(const Vec3& y, const Vec3& x, double m, double M);

struct JrdCoords {
    double Lambda1, Lambda2, Gamma1, Gamma2, G, Z;
    double ell1, ell2, gamma1, gamma2, gamma, zeta;
    Phase12 phase() const;
    static JrdCoords from_phase(const Phase12& z);
};

struct RpsCoords {
    double Lambda1, Lambda2, eta1, eta2, p, Z;
    double lambda1, lambda2, xi1, xi2, q, zeta;
    Phase12 phase() const;
    static RpsCoords from_phase(const Phase12& z);
    // z = (eta1, eta2, xi1, xi2, p, q)
    Eigen::Matrix<double, 6, 1> z() const;
};

struct PeriheliaCoords {
    double Lambda1, Lambda2, Gamma2, Theta, G, Z;
    double ell1, ell2, g2, vartheta, g, zeta;
    Phase12 phase() const;
    static PeriheliaCoords from_phase(const Phase12& z);
};

// threshold: |node| < node_tol * |C|
inline constexpr double kNodeTol = 1e-8;

JrdCoords jrd_from_cartesian(const CartesianState& s, const MassParams& mp);
CartesianState cartesian_from_jrd(const JrdCoords& j, const MassParams& mp);

RpsCoords rps_from_jrd(const JrdCoords& j);
JrdCoords jrd_from_rps(const RpsCoords& r);
RpsCoords rps_from_cartesian(const CartesianState& s, const MassParams& mp);
// regular on z = 0
CartesianState cartesian_from_rps(const RpsCoords& r, const MassParams& mp);

double g_rps(const RpsCoords& r);

PeriheliaCoords perihelia_from_cartesian(const CartesianState& s, const MassParams& mp);
CartesianState cartesian_from_perihelia(const PeriheliaCoords& p, const MassParams& mp);
// Gamma1 as a function of the perihelia reduced variables
double gamma1_from_perihelia(double G, double G2, double Theta, double vartheta);

// H = sum(|y_i|^2/(2 m_i) - m_i M_i/|x_i|) + mu(-m1 m2/|x1-x2| + y1.y2/m0)
double hamiltonian(const CartesianState& s, const MassParams& mp);
double hamiltonian(const JrdCoords& c, const MassParams& mp);
double hamiltonian(const RpsCoords& c, const MassParams& mp);
double hamiltonian(const PeriheliaCoords& c, const MassParams& mp);
double kepler_part(double Lambda1, double Lambda2, const MassParams& mp);
// dh_k/dLambda_i = m^3 M^2 / Lambda^3
double kepler_frequency(int i, double Lambda, const MassParams& mp);
double lambda_from_a(int i, double a, const MassParams& mp);
double a_from_lambda(int i, double Lambda, const MassParams& mp);

// max |J^T Omega J - Omega| for the centred fourth-order finite-difference Jacobian of f at x;
// angle outputs listed in angle_mask are wrapped to (-pi, pi] before differencing
template <class F>
double symplecticity_defect(F&& f, const Phase12& x, const std::array<bool, 12>& angle_mask, double h = 1e-6);

Eigen::Matrix<double, 12, 12> standard_omega();

}  // namespace tskam

#include "tskam/kepler_impl.hpp"
