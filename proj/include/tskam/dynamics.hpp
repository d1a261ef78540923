#pragma once

// Full three-body flow in heliocentric variables, frequency analysis, stability indicators.
//
// The integrator splits H = H_kep + mu(-m1 m2/|x1 - x2|) + mu y1.y2/m0 into an exact Kepler
// drift, a kick and a linear drift (Wisdom-Holman); the second-order step is symmetric and is
// composed to order 4 or 6. Steps are time-reversible up to rounding.

#include "tskam/kam.hpp"
#include "tskam/kepler.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace tskam {

struct IntegratorConfig {
    std::string scheme = "wh4";   // wh2 | wh4 | wh6
    double step = 0;              // <= 0: inner Kepler period / 64
    double time = 0;
    int stride = 1;               // steps between recorded samples
    double collision_factor = 1e-3;  // abort when |x1 - x2| < factor * a2(t = 0)
};
void validate(const IntegratorConfig& cfg);

Vec3 angular_momentum(const CartesianState& s);

// exact two-body flow of |y|^2/(2m) - m M/|x| for time tau; throws Numerical on unbound orbits
void kepler_drift(Vec3& x, Vec3& y, double m, double M, double tau);
CartesianState wh_step(const CartesianState& s, const MassParams& mp, double tau, const std::string& scheme);

struct Trajectory {
    std::vector<double> t;
    std::vector<CartesianState> states;
    std::vector<double> energy_error;  // |E(t) - E0| / |E0|
    std::vector<double> c_error;       // |C(t) - C0| / |C0|
    double E0 = 0;
    Vec3 C0 = Vec3::Zero();
    double step = 0;
    double max_energy_error() const;
    double max_c_error() const;
};

// observer sees every recorded sample (t = 0 included)
void integrate(const CartesianState& s0, const MassParams& mp, const IntegratorConfig& cfg,
               const std::function<void(double, const CartesianState&)>& observer);
Trajectory integrate(const CartesianState& s0, const MassParams& mp, const IntegratorConfig& cfg);

// y -> -y: H is even in the momenta, so this conjugates the flow to its inverse
CartesianState reverse_momenta(const CartesianState& s);

struct FrequencyComponent {
    double frequency = 0;      // angular frequency, signed
    std::complex<double> amplitude;
    double residual = 0;       // max deviation of the two half-window estimates
};
// refined Fourier analysis with a Hanning window; components in extraction order
std::vector<FrequencyComponent> naff(const std::vector<std::complex<double>>& signal, double dt, int nfreq);

struct FrequencySpectrum {
    std::vector<std::string> signals;
    std::vector<FrequencyComponent> fast, slow;
    double span = 0;
    bool quasi_periodic = false;  // every residual below tol * (|frequency| + 2 pi / span)
    DiophantineReport diophantine;
    bool diophantine_checked = false;
};
// signals: "lambda1", "lambda2" (rps mean longitudes, fast block), "x1", "x2" (planar position, fast),
// "eta1", "eta2", "pq" (rps secular pairs, slow block). Slow signals need span >= 2^7 slow periods.
FrequencySpectrum frequency_analysis(const Trajectory& tr, const MassParams& mp, const std::vector<std::string>& signals,
                                     double tol = 1e-6);
void attach_diophantine(FrequencySpectrum& fs, double gamma1, double gamma2, double tau, int Kmax);

struct StabilityReport {
    std::string chart;           // rps | perihelia
    std::string classification;  // elliptic | hyperbolic | inconclusive
    double amplitude0 = 0, max_amplitude = 0;
    double growth_rate = 0;      // fitted e-folding rate of the transverse amplitude
    double predicted_rate = 0;   // from the linearised averaged flow
    double ratio() const { return predicted_rate > 0 ? growth_rate / predicted_rate : 0.0; }
    std::vector<double> t, amplitude;
};

// seed near M_pi: bounded when |z(t)| <= 2 |z(0)| throughout
StabilityReport stability_rps(const RpsCoords& seed, const MassParams& mp, const IntegratorConfig& cfg);

struct TransverseLinearization {
    Eigen::Matrix2d A;           // d/dt (Theta, vartheta) = A (Theta, vartheta), mu included
    double lambda = 0;           // unstable eigenvalue
    Eigen::Vector2d unstable, left;  // right eigenvector, dual left eigenvector (left.unstable = 1)
};
// linearised averaged flow at (Theta, vartheta) = 0 of the perihelia chart
TransverseLinearization transverse_linearization(double L1, double L2, double G2, double G, const MassParams& mp,
                                                 int N = 64);
// seed on N_0 displaced by delta along the unstable direction; amplitude = |left . (Theta, vartheta)|
// averaged over windows of one outer period
StabilityReport stability_perihelia(double L1, double L2, double G2, double G, double delta, const MassParams& mp,
                                    const IntegratorConfig& cfg, double growth_cap = 50.0);

struct SlowRate {
    double mu = 0, rate = 0, predicted = 0;
};
struct SlowSweep {
    std::vector<SlowRate> points;
    double exponent = 0;  // slope of log|rate| against log mu
};
// phase velocity of the normal mode `mode` (modes of the quadratic secular part at z = 0, increasing
// frequency) excited to amplitude rho, fitted over `time`; the other two modes are seeded at 0.3 rho
SlowSweep slow_frequency_sweep(double L1, double L2, const MassParams& base, const std::vector<double>& mus, int mode,
                               double rho, double time, const std::string& scheme = "wh4", double step = 0);

std::string trajectory_csv(const Trajectory& tr, const MassParams& mp, const std::string& chart);
std::string to_json(const FrequencySpectrum& fs);
std::string to_json(const StabilityReport& r);

}  // namespace tskam
