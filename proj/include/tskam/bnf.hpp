#pragma once

// Birkhoff normal form of the averaged secular Hamiltonian around z = 0.
//
// Diagonal variables w = (pbar; qbar) with z_rps = M w. Series run in u = (pbar - i qbar)/sqrt2,
// v = -i (pbar + i qbar)/sqrt2, so r_k = (pbar_k^2 + qbar_k^2)/2 = i u_k v_k and the quadratic
// part reads sum i Omega_k u_k v_k.

#include "tskam/kepler.hpp"
#include "tskam/tfseries.hpp"

#include <functional>
#include <map>
#include <vector>

namespace tskam {

struct Diagonalization {
    Eigen::MatrixXd M;       // columns: pbar_1..pbar_d, qbar_1..qbar_d
    Eigen::VectorXd Omega;   // signed: the quadratic form becomes sum Omega_k (pbar_k^2 + qbar_k^2)/2
    double symplectic_residual = 0;   // max |M^T S M - S|
    double conjugation_residual = 0;  // max |M^T H M - diag(Omega, Omega)| / max |H|
};
// H: 2d x 2d symmetric, momenta first. Throws NotElliptic / Resonance.
Diagonalization diagonalize_quadratic(const Eigen::MatrixXd& H);
// reorders the oscillator pairs: new k = old perm[k]
Diagonalization permute(const Diagonalization& D, const std::vector<int>& perm);

// pbar_j, qbar_j as series in (u, v)
TFSeries real_p(int m, int j, const TruncationWindow& w = {});
TFSeries real_q(int m, int j, const TruncationWindow& w = {});

struct BnfConfig {
    int s = 4;
    int N = 32;               // quadrature nodes for the Taylor extraction
    double rho_rel = 0.05;    // extraction radius / sqrt(Lambda2)
    int extra_degree = 2;     // degrees above 2s absorbed by the radial fit
    double resonance_tol = 1e-6;
};

struct BnfResult {
    int s = 0;
    double Lambda1 = 0, Lambda2 = 0;
    double C0 = 0;
    Eigen::VectorXd Omega;
    Eigen::VectorXd sigma;  // G_rps = L1 - L2 + sum sigma_k r_k in diagonal variables
    Eigen::MatrixXd T;
    // P_j for 3 <= j <= s: exponent in r -> coefficient
    std::vector<std::map<std::vector<int>, double>> Pj;
    Eigen::MatrixXd M;
    TFSeries input;        // Taylor polynomial being normalised
    TFSeries normal_form;  // only u^a v^a terms
    std::vector<TFSeries> generators;
    std::vector<TFSeries> coordinate_map;  // images of u_1..u_d, v_1..v_d
    double conjugation_residual = 0;       // non-normal terms through degree 2s / input scale
    double min_divisor_ratio = 0;          // min |Omega.k| / (|Omega| |k|_1) over eliminated modes
    double symmetry_defect = 0;            // |F(theta + t sigma) - F(theta)| / scale at probe points
    double extraction_radius = 0;
    // exact Hamiltonian in diagonal real variables w
    std::function<double(const Eigen::VectorXd&)> hamiltonian;

    double r_coefficient(const std::vector<int>& a) const;
    double normal_form_value(const Eigen::VectorXd& w) const;
    Eigen::VectorXd transform(const Eigen::VectorXd& wbar) const;  // w = phi_bnf(wbar)
};

// Lie elimination of every u^a v^b term with a != b through total degree 2s.
// taylor must carry the quadratic part sum i Omega_k u_k v_k.
BnfResult birkhoff_normalize(const TFSeries& taylor, const Eigen::VectorXd& Omega, int s, double resonance_tol = 1e-6);

// full pipeline at z = 0 of f_av in the rps chart
BnfResult bnf_at(double L1, double L2, const MassParams& mp, const BnfConfig& cfg);

struct TorsionReport {
    double det = 0, scale = 0;  // scale = max|T_ij|^3
    double ratio() const { return scale > 0 ? std::abs(det) / scale : 0.0; }
    double asymmetry = 0;
};
TorsionReport torsion_det(const BnfResult& r);

struct RemainderFit {
    std::vector<double> radii, norms;
    double exponent = 0;
};
// sup over sampled directions of |H(phi_bnf(wbar)) - NF(wbar)| on spheres |wbar| = eps; log-log slope
RemainderFit remainder_scaling(const BnfResult& r, const std::vector<double>& eps_list, int directions = 48,
                               std::uint64_t seed = 7);

std::string to_json(const BnfResult& r, const RemainderFit* fit = nullptr);

}  // namespace tskam
