#pragma once

// Averages of the perturbing function f = -m1 m2/|x1-x2| + y1.y2/m0 over both mean anomalies,
// and the two equilibria of the averaged system at the retrograde configuration.
//
// The average runs over eccentric anomalies with weight (1 - e cos u), which keeps the
// trapezoid rule spectrally accurate for eccentric orbits. The monopole -m1 m2/a2 is exact
// and the dipole averages to zero, so both are removed pointwise before summing; what is
// summed is O(alpha^2) and keeps its digits under finite differencing.

#include "tskam/domain.hpp"
#include "tskam/kepler.hpp"

#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace tskam {

struct QuadratureConfig {
    int N = 64;                 // nodes per angle, even, >= 8
    int stencil_order = 4;      // 2 or 4
    double step_rel = 1e-3;     // FD step / variable scale
    double alpha0 = 5e-3;       // largest alpha used by the quadrupole fit
    double fit_tol = 1e-6;      // relative change of P when the alpha ladder is halved
    double eig_tol = 1e-6;      // real/imaginary part tolerance for classification
    double grad_tol = 1e-8;     // gradient / Hessian scale
    bool strict = true;         // throw on the error conditions instead of only reporting
};
void validate(const QuadratureConfig& cfg);

// (1/N^2) sum over the tensor trapezoid grid on [0, 2pi)^2, pairwise summation
double average_fast_angles(const std::function<double(double, double)>& g, int N);

// secular part of f averaged over the two ellipses through s: the exact monopole -m1 m2/a2 removed
double secular_part(const CartesianState& s, const MassParams& mp, int N);
// full average, monopole included
double average_perturbation(const CartesianState& s, const MassParams& mp, int N);
double average_fast_angles(const RpsCoords& r, const MassParams& mp, const QuadratureConfig& cfg);
double average_fast_angles(const PeriheliaCoords& p, const MassParams& mp, const QuadratureConfig& cfg);
double average_fast_angles(const JrdCoords& j, const MassParams& mp, const QuadratureConfig& cfg);

// <1/|kappa x1 - x2| - 1/|x2| - kappa x1.x2/|x2|^3> over both ellipses (inner orbit scaled by kappa)
double scaled_remainder(const KeplerOrbit& o1, const KeplerOrbit& o2, double kappa, int N);

struct QuadrupoleReport {
    double P = 0, residual = 0;  // residual: |P(alpha0) - P(alpha0/2)| / |P|
    std::vector<double> alphas;
};
// coefficient of alpha^2 in -(a2/(m1 m2)) f_av - 1 at fixed orbit shapes
QuadrupoleReport quadrupole_P(double L1, double L2, double G2, double Theta, double vartheta, double G,
                              const MassParams& mp, const QuadratureConfig& cfg);
QuadrupoleReport quadrupole_P(const KeplerOrbit& o1, const KeplerOrbit& o2, const QuadratureConfig& cfg);
// closed-form doubly averaged quadrupole from the orbit shapes (independent check)
double quadrupole_closed_form(const KeplerOrbit& o1, const KeplerOrbit& o2);

// point of N0 with the given actions; angles fixed at arbitrary regular values
PeriheliaCoords perihelia_point(double L1, double L2, double G2, double Theta, double vartheta, double G);

struct EquilibriumReport {
    std::string chart;
    std::vector<double> point;
    std::vector<double> gradient;
    double gradient_norm = 0, gradient_ratio = 0, hessian_scale = 0;
    Eigen::MatrixXd hessian;
    std::vector<std::complex<double>> eigenvalues;  // of the linearised secular flow of mu f_av
    std::string classification;                     // elliptic | hyperbolic | mixed
    std::vector<double> rates;                      // Omega_k (elliptic) or lambda (hyperbolic), mu included
    double rate_P = 0;                              // hyperbolic only: sqrt(-det Hess P)
    int N = 0;
    double quadrature_residual = 0;
    bool equilibrium = false;
    bool ok() const { return equilibrium && classification != "mixed"; }
};

// z = 0 in the rps chart; eigenvalues of J Hess(mu f_av) in (eta1, eta2, p; xi1, xi2, q)
EquilibriumReport elliptic_equilibrium_check(double L1, double L2, const MassParams& mp, const QuadratureConfig& cfg);
// (Theta, vartheta) = (0, 0) in the perihelia chart: Hessian of P; rates from the full f_av
EquilibriumReport hyperbolic_equilibrium_check(double L1, double L2, double G2, const DomainSpec& spec,
                                               const QuadratureConfig& cfg);

// draws (L1, L2, G2) in A_p with Gamma1 = G + G2 < L1
bool sample_Ap_physical(const DomainSpec& spec, std::mt19937_64& rng, double& L1, double& L2, double& G2,
                        int max_tries = 100000);

std::string to_json(const EquilibriumReport& r);

}  // namespace tskam
