#include "tskam/domain.hpp"

#include "tskam/kepler.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <random>
#include <sstream>

namespace tskam {

namespace {

double sq(double v) { return v * v; }

// (2/c) sqrt(alpha_+)
double gp_slope(const DomainSpec& s) { return 2.0 / s.c * std::sqrt(s.alpha_plus); }

double c1e2(const DomainSpec& s) { return sq(s.c1 * s.eps); }

}  // namespace

void validate(const DomainSpec& s) {
    auto fail = [](const std::string& m) { throw Error(Error::Kind::Domain, "DomainSpec: " + m); };
    if (!(s.G > 0)) fail("G must be positive");
    if (!(s.Lambda_minus > 0 && s.Lambda_minus < s.Lambda_plus)) fail("need 0 < Lambda_minus < Lambda_plus");
    if (!(s.alpha_minus > 0 && s.alpha_minus < s.alpha_plus && s.alpha_plus < 1)) fail("need 0 < alpha_minus < alpha_plus < 1");
    if (!(s.c > 0 && s.c < 1)) fail("c must lie in (0,1)");
    if (!(s.c1 > 0 && s.c1 < 1)) fail("c1 must lie in (0,1)");
    if (!(s.delta > 0 && s.delta < 1)) fail("delta must lie in (0,1)");
    if (!(s.eps > 0)) fail("eps must be positive");
    if (!(s.gamma >= 0 && s.gamma < c1e2(s))) fail("need 0 <= gamma < c1^2 eps^2");
    if (!(s.masses.m0 > 0 && s.masses.m1 > 0 && s.masses.m2 > 0 && s.masses.mu >= 0)) fail("masses must be positive");
}

KPair k_pm(const DomainSpec& s) {
    const auto& m = s.masses;
    double r = (m.m0 + m.mu * m.m2) / (m.m0 + m.mu * m.m1);
    return {m.m1 / m.m2 * std::sqrt(r * s.alpha_minus), m.m1 / m.m2 * std::sqrt(r * s.alpha_plus)};
}

bool in_L(double L1, double L2, const DomainSpec& s) {
    auto k = k_pm(s);
    return s.Lambda_minus < L2 && L2 < s.Lambda_plus && k.minus * L2 < L1 && L1 < k.plus * L2;
}

// The third inequality is taken homogeneous of degree three, matching curve C.
bool in_Lp(double L1, double L2, const DomainSpec& s) {
    if (!in_L(L1, L2, s)) return false;
    const double G = s.G, t = gp_slope(s);
    if (!(L1 > G + t * L2)) return false;
    if (!(5 * L1 * L1 * G - sq(G + t * L1) * (4 * G + t * L1) > 0)) return false;
    if (!(5 * L1 * L1 * G - sq(G + L2) * (4 * G + L2) > 0)) return false;
    return L2 > G && L1 > 2 * G;
}

bool in_Gp(double G2, double /*L1*/, double L2, const DomainSpec& s) {
    return std::max(gp_slope(s) * L2, s.G) < G2 && G2 < L2;
}

bool in_Bp(double Theta, double vartheta, const DomainSpec& s) {
    return std::abs(Theta) < s.G / 2 && std::abs(vartheta) < kPi / 2;
}

bool in_Ap(double L1, double L2, double G2, const DomainSpec& s) {
    return in_Lp(L1, L2, s) && in_Gp(G2, L1, L2, s);
}

double lambda_plus_of_G(double G) { return G / 2 * (13 + std::sqrt(185.0)); }

double underline_k() { return 0.25 * std::sqrt(0.3 * (69 + 11 * std::sqrt(33.0))); }

double curve_C(double x) { return (1 + x) * std::sqrt((4 + x) / 5); }

TangencyCubic tangency_cubic() {
    TangencyCubic t;
    const double r33 = std::sqrt(33.0);
    t.roots = {(1 - r33) / 2, -1.0, (1 + r33) / 2};
    t.a = t.roots[2];
    t.b = (-17 + r33) / 32;
    t.k = underline_k();
    double res = 0;
    for (double a : t.roots) res = std::max(res, std::abs(a * a * a - 9 * a - 8));
    res = std::max(res, std::abs(-(t.b + 2 * t.a) - (6 - 5 * t.k * t.k)));
    res = std::max(res, std::abs(2 * t.a * t.b + t.a * t.a - 9));
    res = std::max(res, std::abs(-t.a * t.a * t.b - 4));
    t.residual = res;
    return t;
}

double claim_cubic(double x, double th) {
    return ((x + 1) * x - (1 + 10 * th)) * x - 1 - 10 * th - 5 * th * th;
}

double claim_cubic_derivative(double x, double th) { return 3 * x * x + 2 * x - (1 + 10 * th); }

double claim_F(double x, double th) { return x + 1 + th - curve_C(x); }

double theta_validity_bound() { return (-19 + std::sqrt(1385.0)) / 128; }

double xstar(double th) {
    if (!(th > 0 && th <= 0.1)) throw Error(Error::Kind::Domain, "xstar: theta must lie in (0, 1/10]");
    auto f = [th](double x) { return claim_cubic(x, th); };
    auto tol = [](double a, double b) { return std::abs(b - a) < 1e-13; };
    auto r = boost::math::tools::bisect(f, 1 + 4 * th, 1 + 6 * th, tol);
    return 0.5 * (r.first + r.second);
}

BracketReport xstar_bracket(double th) {
    BracketReport r{};
    r.theta = th;
    r.g_lo = claim_cubic(1 + 4 * th, th);
    r.g_hi = claim_cubic(1 + 6 * th, th);
    r.bracket_ok = r.g_lo < 0 && 0 < r.g_hi;
    r.xstar = xstar(th);
    r.root_inside = 1 + 4 * th < r.xstar && r.xstar < 1 + 6 * th && std::abs(claim_cubic(r.xstar, th)) < 1e-12;
    // increasing past the critical point (-1+sqrt(4+30 th))/3 < 1; sampled on [1, x*+1]
    r.monotone_ok = true;
    for (int i = 0; i <= 1000; ++i) {
        double x = 1 + (r.xstar) * i / 1000.0;
        if (!(claim_cubic_derivative(x, th) > 0)) r.monotone_ok = false;
    }
    return r;
}

bool in_L0(double L1, double L2, const DomainSpec& s) {
    const double G = s.G, Lp = s.Lambda_plus;
    if (!(G <= L2 && L2 <= Lp)) return false;
    double lo = (G + L2) * std::sqrt((4 * G + L2) / (5 * G));
    return lo < L1 && L1 < std::min(k_pm(s).plus * L2, 2 * Lp);
}

bool in_A0(double L1, double L2, double G2, const DomainSpec& s) {
    return in_L0(L1, L2, s) && in_Gp(G2, L1, L2, s);
}

std::string InclusionHypotheses::failures() const {
    std::string out;
    if (!lambda_minus_below_G) out += "Lambda_minus < G; ";
    if (!k_minus_ok) out += "k_minus <= underline_k; ";
    if (!k_plus_ok) out += "k_plus >= 2; ";
    if (!alpha_plus_ok) out += "alpha_plus <= c^2/16; ";
    return out;
}

InclusionHypotheses check_inclusion_hypotheses(const DomainSpec& s) {
    auto k = k_pm(s);
    return {s.Lambda_minus < s.G, k.minus <= underline_k(), k.plus >= 2.0, s.alpha_plus <= s.c * s.c / 16};
}

InclusionReport verify_inclusion_X(const DomainSpec& s, std::size_t samples, std::uint64_t seed) {
    validate(s);
    auto h = check_inclusion_hypotheses(s);
    if (!h.all()) throw Error(Error::Kind::Domain, "verify_inclusion_X: hypotheses violated: " + h.failures());
    const auto k = k_pm(s);
    const double xp = s.Lambda_plus / s.G, t = gp_slope(s);
    const double ytop = std::min(k.plus * xp, 2 * xp);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(1.0, xp), uy(2.0, ytop);
    InclusionReport rep;
    while (rep.samples < samples) {
        double x = ux(rng), y = uy(rng);
        if (!in_L0(y * s.G, x * s.G, s)) continue;
        ++rep.samples;
        bool inx = 1 <= x && x <= xp;
        bool x1 = inx && y > 2 && std::max(k.minus * x, curve_C(x)) < y && y < k.plus * x;
        bool x2 = inx && y > 1 + t * x;
        bool x3 = inx && y > 2 && 5 * y * y - sq(1 + t * y) * (4 + t * y) > 0;
        rep.in_X1 += x1;
        rep.in_X2 += x2;
        rep.in_X3 += x3;
        rep.in_all += x1 && x2 && x3;
        rep.chord_ok += 1.2 * x + 0.8 <= curve_C(x);
    }
    return rep;
}

bool in_L1(double L1, double L2, const DomainSpec& s) {
    return in_L(L1, L2, s) && std::abs(L1 - L2 - s.G) < c1e2(s);
}

bool in_G1(double G2, double L2, const DomainSpec& s) {
    return L2 - c1e2(s) < G2 && G2 < L2 - s.gamma;
}

bool in_A1(double L1, double L2, double G2, const DomainSpec& s) {
    return in_L1(L1, L2, s) && in_G1(G2, L2, s);
}

bool in_B1(double Theta, double vt, const DomainSpec& s) {
    return Theta * Theta < c1e2(s) * s.G && vt * vt < c1e2(s) / s.G;
}

double z_norm_sq(double L1, double L2, double G2, double Theta, double vt, double G) {
    double G1 = gamma1_from_perihelia(G, G2, Theta, vt);
    return 2 * (G + G2 - G1) + 2 * (L1 - G1) + 2 * (L2 - G2);
}

ZSmallnessReport z_smallness(const DomainSpec& s, std::size_t samples, std::uint64_t seed) {
    validate(s);
    const double w = c1e2(s);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), u01(0.0, 1.0);
    // Lambda2 range where L1 is nonempty: the line Lambda1 = Lambda2 + G must sit inside the cone of L
    auto k = k_pm(s);
    double lo = std::max(s.Lambda_minus, s.G / (k.plus - 1 > 0 ? k.plus - 1 : 1e-300));
    double hi = s.Lambda_plus;
    if (k.minus > 1) hi = std::min(hi, s.G / (k.minus - 1));
    ZSmallnessReport rep;
    std::size_t tries = 0;
    while (rep.samples < samples && tries < 1000 * samples) {
        ++tries;
        double L2 = lo + (hi - lo) * u01(rng);
        double L1 = L2 + s.G + w * u(rng);
        double G2 = L2 - s.gamma - (w - s.gamma) * u01(rng);
        double Th = s.c1 * std::sqrt(s.G) * s.eps * u(rng);
        double vt = s.c1 * s.eps / std::sqrt(s.G) * u(rng);
        if (!in_A1(L1, L2, G2, s) || !in_B1(Th, vt, s) || std::abs(Th) >= std::min(s.G, G2)) continue;
        ++rep.samples;
        double G1 = gamma1_from_perihelia(s.G, G2, Th, vt);
        if (G1 > L1) ++rep.unphysical;
        double z2 = z_norm_sq(L1, L2, G2, Th, vt, s.G);
        rep.max_ratio = std::max(rep.max_ratio, std::sqrt(std::abs(z2)) / s.eps);
    }
    return rep;
}

double calibrate_c1(const DomainSpec& s0, std::size_t samples, std::uint64_t seed) {
    double best = 0;
    for (double c1 = 0.99; c1 > 1e-3; c1 *= 0.95) {
        DomainSpec s = s0;
        s.c1 = c1;
        s.gamma = std::min(s0.gamma, 0.5 * c1 * c1 * s.eps * s.eps);
        auto r = z_smallness(s, samples, seed);
        if (r.samples == samples && r.max_ratio < 1.0) {
            best = c1;
            break;
        }
    }
    return best;
}

double astar_integral(double th, double ze, double m) {
    double xs = xstar(th);
    auto f = [&](double x) {
        double F1 = std::min(2 * x, x + 1 + th) - curve_C(x);
        double F2 = std::min({th - ze, x - 1 - ze, m * x - ze});
        return F1 * F2;
    };
    using boost::math::quadrature::gauss_kronrod;
    double a = 1 + ze, mid = 1 + th;
    double v = 0;
    if (mid > a) v += gauss_kronrod<double, 31>::integrate(f, a, std::min(mid, xs), 10, 1e-14);
    if (xs > mid) v += gauss_kronrod<double, 31>::integrate(f, std::max(a, mid), xs, 10, 1e-14);
    return v;
}

MeasureReport measure_Astar(const DomainSpec& s, std::size_t samples, std::uint64_t seed) {
    validate(s);
    const double w = c1e2(s);
    if (!(s.G >= 10 * w)) throw Error(Error::Kind::Domain, "measure_Astar: need G >= 10 c1^2 eps^2");
    if (!(s.alpha_plus < s.c * s.c / 16)) throw Error(Error::Kind::Domain, "measure_Astar: need alpha_plus < c^2/16");
    MeasureReport r;
    r.theta = w / s.G;
    r.zeta = s.gamma / s.G;
    r.xstar = xstar(r.theta);
    const double m = 1 - gp_slope(s);
    r.integral = std::pow(s.G, 3) * astar_integral(r.theta, r.zeta, m);
    r.bound = 0.9 * (w - s.gamma) * w * w;

    // sheared box: Lambda2, d = Lambda1 - Lambda2 - G, g = Lambda2 - Gamma2; unit Jacobian
    const double a2 = s.G * (1 + r.zeta), b2 = s.G * r.xstar;
    r.box_volume = (b2 - a2) * (2 * w) * (w - s.gamma);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (std::size_t i = 0; i < samples; ++i) {
        double L2 = a2 + (b2 - a2) * u01(rng);
        double L1 = L2 + s.G + w * (2 * u01(rng) - 1);
        double G2 = L2 - s.gamma - (w - s.gamma) * u01(rng);
        if (in_A0(L1, L2, G2, s) && in_A1(L1, L2, G2, s)) ++r.hits;
    }
    r.samples = samples;
    double p = double(r.hits) / double(samples);
    r.monte_carlo = p * r.box_volume;
    r.mc_sigma = std::sqrt(p * (1 - p) / double(samples)) * r.box_volume;
    return r;
}

std::vector<PlotRow> figure_data(const DomainSpec& s, int id, int points) {
    std::vector<PlotRow> rows;
    const double xp = s.Lambda_plus / s.G;
    auto k = k_pm(s);
    auto grid = [&](double a, double b, int i) { return a + (b - a) * i / double(points - 1); };
    if (id == 1) {
        for (int i = 0; i < points; ++i) {
            double x = grid(0.0, xp, i);
            rows.push_back({x, curve_C(x), "C"});
        }
        for (int i = 0; i < points; ++i) {
            double x = grid(0.0, xp, i);
            rows.push_back({x, k.minus * x, "slope_k_minus"});
        }
        for (int i = 0; i < points; ++i) {
            double x = grid(0.0, xp, i);
            rows.push_back({x, k.plus * x, "slope_k_plus"});
        }
        for (int i = 0; i < points; ++i) {
            double x = grid(0.0, xp, i);
            rows.push_back({x, 1.2 * x + 0.8, "tangent_P0"});
        }
        rows.push_back({1.0, 2.0, "P0"});
    } else if (id == 2) {
        const double th = c1e2(s) / s.G;
        for (int i = 0; i < points; ++i) {
            double x = grid(1.0, xp, i);
            rows.push_back({x, curve_C(x), "L0_lower"});
        }
        for (int i = 0; i < points; ++i) {
            double x = grid(1.0, xp, i);
            rows.push_back({x, std::min(k.plus * x, 2 * xp), "L0_upper"});
        }
        for (int i = 0; i < points; ++i) {
            double x = grid(1.0, xp, i);
            rows.push_back({x, x + 1 - th, "L1_lower"});
        }
        for (int i = 0; i < points; ++i) {
            double x = grid(1.0, xp, i);
            rows.push_back({x, x + 1 + th, "L1_upper"});
        }
    } else {
        throw Error(Error::Kind::Config, "figure_id must be 1 or 2");
    }
    return rows;
}

std::string plot_csv(const std::vector<PlotRow>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "x,y,series\n";
    for (const auto& r : rows) os << r.x << ',' << r.y << ',' << r.series << '\n';
    return os.str();
}

}  // namespace tskam
