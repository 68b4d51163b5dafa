// Shared aliases and small numeric helpers used across the library.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qet {

using cplx = std::complex<double>;
using Vec  = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Mat  = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

inline constexpr double kHermTol = 1e-10;  // construction tolerance
inline constexpr double kRankTol = 1e-8;   // rank-counting tolerance
inline constexpr double kPi = 3.14159265358979323846;

// Norm exponents live in [1, inf]; infinity() encodes q = inf.
inline double q_inf() { return std::numeric_limits<double>::infinity(); }

// Reciprocal with the conventions 1/0 = inf and 1/inf = 0.
inline double q_recip(double q) {
    if (q == 0.0) return q_inf();
    if (std::isinf(q)) return 0.0;
    return 1.0 / q;
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// sin(x)/x with the removable singularity at 0.
inline double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// Signed distance lifted to [-pi, pi): the representative of a mod 2*pi.
inline double wrap_pm_pi(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < -kPi) a += 2.0 * kPi;
    if (a >= kPi) a -= 2.0 * kPi;
    return a;
}

// |a|_{2pi}: distance from a to the nearest multiple of 2*pi, in [0, pi].
inline double dist_2pi(double a) { return std::abs(wrap_pm_pi(a)); }

} // namespace qet
