#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mtasep/limits.hpp"

using namespace mtasep;
using boost::math::quadrature::gauss_kronrod;

namespace {

template <class F>
double quad(F f, double a, double b) {
    return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// Richardson-extrapolated central mixed difference.
template <class F>
double mixed_derivative(F f, double a, double b, double h = 0.02) {
    auto d = [&](double s) {
        return (f(a + s, b + s) - f(a + s, b - s) - f(a - s, b + s) + f(a - s, b - s)) / (4 * s * s);
    };
    return (4 * d(h / 2) - d(h)) / 3;
}

double erf_series(double x) {
    double s = 0, term = x;
    for (int n = 0; n < 20; ++n) {
        s += term / (2 * n + 1);
        term *= -x * x / (n + 1);
    }
    return 2 / std::sqrt(std::numbers::pi) * s;
}

}  // namespace

TEST_CASE("erf against its Maclaurin series") {
    for (double x : {0.1, 0.3, 0.5, 0.8, 1.0}) CHECK(std::abs(std::erf(x) - erf_series(x)) < 1e-14);
}

TEST_CASE("single leader law") {
    CHECK(survival_leader(0) == 1.0);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(std::abs(quad(density_leader, 0, inf) - 1) < 1e-10);
    for (double a : {0.5, 1.0, 2.0}) {
        const double h = 1e-4;
        const double fd = -(survival_leader(a + h) - survival_leader(a - h)) / (2 * h);
        CHECK(std::abs(density_leader(a) - fd) < 1e-6);
    }
}

TEST_CASE("leader type given position") {
    const double inf = std::numeric_limits<double>::infinity();
    for (double x : {-1.0, 0.0, 1.0}) {
        CHECK(std::abs(joint_position_type_survival(x, 0) - 1) < 1e-15);
        CHECK(std::abs(quad([x](double a) { return conditional_type_density(a, x); }, 0, inf) - 1) < 1e-6);
    }
    for (double x = -2; x <= 2; x += 0.5)
        for (double a = 0.25; a <= 4; a += 0.25) {
            const double h = 1e-4;
            const double fd = -(joint_position_type_survival(x, a + h) - joint_position_type_survival(x, a - h)) / (2 * h);
            CHECK(std::abs(conditional_type_density(a, x) - fd) < 1e-8);
        }
}

TEST_CASE("two leader density normalization") {
    const double A = 14;
    auto upper = quad([&](double a3) { return quad([&](double a2) { return joint_two_leader_density(a2, a3); }, a3, A); }, 0, A);
    auto lower = quad([&](double a2) { return quad([&](double a3) { return joint_two_leader_density(a2, a3); }, a2, A); }, 0, A);
    CHECK(std::abs(upper + lower - 1) < 1e-3);
    CHECK(std::abs(upper - 0.5) < 1e-3);
    for (double a2 : {0.3, 1.0, 2.0, 3.5}) {
        double m = quad([&](double a3) { return joint_two_leader_density(a2, a3); }, 0, a2) +
                   quad([&](double a3) { return joint_two_leader_density(a2, a3); }, a2, A);
        CHECK(std::abs(m - density_leader(a2)) < 1e-3);
    }
    for (double a2 = 0; a2 <= 6; a2 += 0.25)
        for (double a3 = 0; a3 <= 6; a3 += 0.25) CHECK(joint_two_leader_density(a2, a3) >= -1e-12);
}

TEST_CASE("line oracles") {
    for (double a : {0.0, 0.5, 1.0, 2.0}) CHECK(std::abs(oracle_Y(a, 0) - survival_leader(a)) < 1e-10);
    LineQuadrature half;
    half.shift = 0.35;
    half.step = 0.02;
    CHECK(std::abs(oracle_Y(2, 1) - oracle_Y(2, 1, half)) < 1e-8);
    CHECK(std::abs(oracle_Yhat(1, 2) - oracle_Yhat(1, 2, half)) < 1e-8);
    CHECK(oracle_Yhat(1, 2) > 0);
    CHECK(oracle_Y(2, 1) > 0);
}

TEST_CASE("closed forms match mixed derivatives of the line oracles") {
    for (auto [a2, a3] : std::vector<std::pair<double, double>>{{2, 1}, {1.5, 0.5}, {3, 1}, {1, 0.2}, {2.5, 2.2}}) {
        const double fd = mixed_derivative([](double x, double y) { return oracle_Y(x, y); }, a2, a3);
        CHECK(std::abs(fd - joint_two_leader_density(a2, a3)) < 1e-4 * std::abs(fd));
    }
    for (auto [a2, a3] : std::vector<std::pair<double, double>>{{1, 2}, {0.5, 1.5}, {1, 3}, {0.2, 1}, {2.2, 2.5}}) {
        const double fd = mixed_derivative([](double x, double y) { return oracle_Yhat(x, y); }, a2, a3);
        CHECK(std::abs(fd - joint_two_leader_density(a2, a3)) < 1e-4 * std::abs(fd));
    }
}

TEST_CASE("seam jump matches the oracle jump") {
    for (double a : {0.5, 1.0, 2.0}) {
        const double below = mixed_derivative([](double x, double y) { return oracle_Y(x, y); }, a, a - 0.05, 0.01);
        const double above = mixed_derivative([](double x, double y) { return oracle_Yhat(x, y); }, a, a + 0.05, 0.01);
        const double jump = joint_two_leader_density(a, a - 0.05) - joint_two_leader_density(a, a + 0.05);
        CHECK(std::abs((below - above) - jump) < 1e-4 * std::abs(jump));
    }
}

TEST_CASE("leader change constant") {
    CHECK(leader_changes_constant() > 0.4134);
    CHECK(leader_changes_constant() < 0.4136);
    CHECK(std::abs(leader_changes_integral() - leader_changes_constant()) < 1e-6);
}
