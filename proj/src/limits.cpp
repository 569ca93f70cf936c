#include "mtasep/limits.hpp"

#include <cmath>
#include <cstdio>
#include <complex>
#include <numbers>
#include <string>

#include "mtasep/errors.hpp"

namespace mtasep {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt3 = std::numbers::sqrt3;

using cd = std::complex<double>;

// (2 pi i)^{-2} times the trapezoid sum over (Im x2, Im x3) = (-shift, -shift).
template <class F>
double line_integral(F&& f, const LineQuadrature& q) {
    const long m = static_cast<long>(std::ceil(q.half_width / q.step));
    cd fine = 0, coarse = 0;
    for (long i = -m; i <= m; ++i) {
        const cd x2(static_cast<double>(i) * q.step, -q.shift);
        for (long j = -m; j <= m; ++j) {
            const cd x3(static_cast<double>(j) * q.step, -q.shift);
            const cd v = f(x2, x3);
            fine += v;
            if (i % 2 == 0 && j % 2 == 0) coarse += v;
        }
    }
    const double h = q.step;
    const cd pref = 1.0 / ((2.0 * kPi * cd(0, 1)) * (2.0 * kPi * cd(0, 1)));
    const cd a = pref * fine * h * h;
    const cd b = pref * coarse * (4 * h * h);
    if (std::abs(a - b) > q.tol) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", std::abs(a - b));
        throw NotConverged(std::string("shifted-line quadrature: step-halving difference ") + buf);
    }
    return a.real();
}

cd gauss_q(cd x2, cd x3) { return std::exp(-(x2 * x2 + x2 * x3 + x3 * x3)); }

}  // namespace

double survival_leader(double a) { return a <= 0 ? 1.0 : 1.0 - std::erf(a / 2); }

double density_leader(double a) { return a < 0 ? 0.0 : std::exp(-a * a / 4) / std::sqrt(kPi); }

double joint_position_type_survival(double x, double a) {
    return 0.5 * (1 + std::erf((-x - a) / kSqrt2) + (1 - std::erf(-x / kSqrt2)) * std::exp(-a * x - a * a / 2));
}

double conditional_type_density(double a, double x) {
    if (a < 0) return 0.0;
    const double g = std::exp(-(x + a) * (x + a) / 2) / std::sqrt(2 * kPi);
    // exp(x^2/2) * exp(-(x+a)^2/2) folded to avoid overflow for large |x|.
    const double tail = std::sqrt(kPi / 2) * (1 + std::erf(x / kSqrt2)) * (a + x) *
                        std::exp(-a * x - a * a / 2) / std::sqrt(2 * kPi);
    return g + tail;
}

double two_leader_d1(double a2, double a3) {
    const double e = std::erf(kSqrt3 / 6 * (a2 + a3));
    return -1 / (16 * kPi) *
           ((4 * e - 4) * std::exp(-(a2 - a3) * (a2 - a3) / 4) * std::sqrt(kPi) * (a2 - a3) +
            2 * kSqrt3 * (a2 * a2 - 6) * std::exp((-a2 * a2 + a2 * a3 - a3 * a3) / 3) +
            std::sqrt(kPi) * std::exp(-a2 * a2 / 4) * (std::erf(kSqrt3 / 6 * (a2 - 2 * a3)) + 1) *
                (-4 * a2 + a2 * a2 * a2 - 2 * a2 * a2 * a3 + 4 * a3));
}

double two_leader_d2(double a2, double a3) {
    return 1 / (4 * std::sqrt(kPi)) *
           (-std::exp(-(a2 - a3) * (a2 - a3) / 4) * (a2 - a3) * (std::erf(kSqrt3 / 6 * (a2 + a3)) - 1) +
            a3 * std::exp(-a3 * a3 / 4) * std::erf(kSqrt3 / 6 * (2 * a2 - a3)) +
            a2 * std::exp(-a2 * a2 / 4) * std::erf(kSqrt3 / 6 * (a2 - 2 * a3)) - a3 * std::exp(-a3 * a3 / 4) +
            a2 * std::exp(-a2 * a2 / 4));
}

double joint_two_leader_density(double a2, double a3) {
    if (a2 < 0 || a3 < 0) return 0.0;
    return a2 > a3 ? two_leader_d1(a3, a2) : two_leader_d2(a3, a2);
}

double oracle_Y(double a2, double a3, const LineQuadrature& q) {
    return line_integral(
        [=](cd x2, cd x3) {
            return (x3 - x2) * (x2 + 2.0 * x3) * (2.0 * x2 + x3) / ((x2 + x3) * x2 * x3 * x3 * x3) * gauss_q(x2, x3) *
                   std::exp(cd(0, -1) * (a3 * x2 + a2 * x3));
        },
        q);
}

double oracle_Yhat(double a2, double a3, const LineQuadrature& q) {
    return line_integral(
        [=](cd x2, cd x3) {
            return (x3 - x2) * (x2 + 2.0 * x3) * (2.0 * x2 + x3) / (x2 * x2 * x3 * x3 * (x2 + x3)) * gauss_q(x2, x3) *
                   std::exp(cd(0, -1) * (a2 * x2 + a3 * x3));
        },
        q);
}

double leader_changes_constant() { return 3 * kSqrt3 / (4 * kPi); }

double leader_changes_integral(const LineQuadrature& q) {
    // The (2 pi i)^{-2} prefactor of line_integral absorbs the sign.
    return -line_integral(
        [](cd x2, cd x3) {
            return (x2 - x3) * (x2 + 2.0 * x3) * (x2 + 2.0 * x3) * (2.0 * x2 + x3) / ((x2 + x3) * (x2 + x3) * x2 * x3) *
                   gauss_q(x2, x3);
        },
        q);
}

}  // namespace mtasep
