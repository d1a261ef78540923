#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tskam {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Every failure surfaced to callers is one of these; the CLI maps `kind` to exit codes.
class Error : public std::runtime_error {
public:
    enum class Kind { Domain, ChartSingularity, NotElliptic, Collision, Resonance, Config, Numerical };
    Error(Kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Planet masses are mu*m1, mu*m2; G_newton = 1.
struct MassParams {
    double m0 = 1.0;
    double m1 = 1.0;
    double m2 = 1.0;
    double mu = 0.0;

    double mass(int i) const { return i == 1 ? m1 : m2; }
    // reduced masses of the heliocentric splitting
    double mred(int i) const { return m0 * mass(i) / (m0 + mu * mass(i)); }
    double Mred(int i) const { return m0 + mu * mass(i); }
};

// angle in (-pi, pi]
inline double wrap_pi(double a) {
    a = std::remainder(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    return a;
}

inline double wrap_2pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a;
}

}  // namespace tskam
