#pragma once

// Action-space sets around the co-planar retrograde configuration, written in the
// reduced coordinates x = Lambda2/G, y = Lambda1/G wherever a proof works in them.

#include "tskam/common.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace tskam {

struct DomainSpec {
    double G = 1.0;
    double Lambda_minus = 0.5;
    double Lambda_plus = 13.300735254367721;  // (13+sqrt(185))/2 at G = 1
    double alpha_minus = 0.0144;
    double alpha_plus = 0.05;
    double c = 0.95;
    double c1 = 0.1;
    double delta = 0.1;
    double eps = 0.5;
    double gamma = 0.0;
    MassParams masses{1.0, 10.0, 1.0, 0.0};
};

void validate(const DomainSpec& spec);

struct KPair {
    double minus, plus;
};
KPair k_pm(const DomainSpec& spec);

bool in_L(double L1, double L2, const DomainSpec& spec);
bool in_Lp(double L1, double L2, const DomainSpec& spec);
bool in_Gp(double G2, double L1, double L2, const DomainSpec& spec);
bool in_Bp(double Theta, double vartheta, const DomainSpec& spec);
bool in_Ap(double L1, double L2, double G2, const DomainSpec& spec);

double lambda_plus_of_G(double G);
double underline_k();
// y = (1+x) sqrt((4+x)/5)
double curve_C(double x);

struct TangencyCubic {
    std::array<double, 3> roots;  // of a^3 - 9a - 8, ascending
    double a, b, k;
    double residual;              // max over the three coefficient identities and the root residuals
};
TangencyCubic tangency_cubic();

// Cubic whose unique positive zero is x*. The linear-term sign is rederived;
// see README.
double claim_cubic(double x, double theta);
double claim_cubic_derivative(double x, double theta);
double claim_F(double x, double theta);
double theta_validity_bound();
double xstar(double theta);

struct BracketReport {
    double theta, xstar, g_lo, g_hi;
    bool bracket_ok, root_inside, monotone_ok;
};
BracketReport xstar_bracket(double theta);

bool in_L0(double L1, double L2, const DomainSpec& spec);
bool in_A0(double L1, double L2, double G2, const DomainSpec& spec);

struct InclusionHypotheses {
    bool lambda_minus_below_G, k_minus_ok, k_plus_ok, alpha_plus_ok;
    bool all() const { return lambda_minus_below_G && k_minus_ok && k_plus_ok && alpha_plus_ok; }
    std::string failures() const;
};
InclusionHypotheses check_inclusion_hypotheses(const DomainSpec& spec);

struct InclusionReport {
    std::size_t samples = 0;
    std::size_t in_X1 = 0, in_X2 = 0, in_X3 = 0, in_all = 0;
    std::size_t chord_ok = 0;  // (6/5)x + 4/5 <= C(x)
    bool pass() const { return samples > 0 && in_all == samples && chord_ok == samples; }
};
// throws Error::Domain when the hypotheses fail
InclusionReport verify_inclusion_X(const DomainSpec& spec, std::size_t samples, std::uint64_t seed);

bool in_L1(double L1, double L2, const DomainSpec& spec);
bool in_G1(double G2, double L2, const DomainSpec& spec);
bool in_A1(double L1, double L2, double G2, const DomainSpec& spec);
bool in_B1(double Theta, double vartheta, const DomainSpec& spec);

// |z|^2 = 2(G+G2-G1) + 2(L1-G1) + 2(L2-G2)
double z_norm_sq(double L1, double L2, double G2, double Theta, double vartheta, double G);

struct ZSmallnessReport {
    std::size_t samples = 0;
    double max_ratio = 0.0;       // max |z| / eps over N1 samples
    std::size_t unphysical = 0;   // samples with Gamma1 > Lambda1
};
ZSmallnessReport z_smallness(const DomainSpec& spec, std::size_t samples, std::uint64_t seed);
// largest c1 on a geometric grid with max |z| < eps
double calibrate_c1(const DomainSpec& spec, std::size_t samples, std::uint64_t seed);

struct MeasureReport {
    double monte_carlo = 0.0, mc_sigma = 0.0;
    double integral = 0.0;
    double bound = 0.0;
    double box_volume = 0.0;
    std::size_t samples = 0, hits = 0;
    double theta = 0.0, zeta = 0.0, xstar = 0.0;
    bool chain_ok(double nsigma = 2.0) const {
        return monte_carlo + nsigma * mc_sigma >= integral && integral >= bound;
    }
};
MeasureReport measure_Astar(const DomainSpec& spec, std::size_t samples, std::uint64_t seed);
// integral of F1*F2 over (1+zeta, x*), G^3 omitted
double astar_integral(double theta, double zeta, double m);

struct PlotRow {
    double x, y;
    std::string series;
};
std::vector<PlotRow> figure_data(const DomainSpec& spec, int figure_id, int points = 200);
std::string plot_csv(const std::vector<PlotRow>& rows);

}  // namespace tskam
