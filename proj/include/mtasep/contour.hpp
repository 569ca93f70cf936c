#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mtasep/lattice.hpp"

namespace mtasep {

using cplx = std::complex<double>;

struct Circle {
    cplx center{0.0, 0.0};
    double radius = 1.0;
};

struct ContourSpec {
    std::vector<Circle> circles;  // one per variable, positively oriented
};

struct QuadratureOptions {
    double tol = 1e-9;
    std::size_t min_nodes = 16;
    std::size_t max_nodes = 0;  // 0: 2^12 for n <= 2, 2^9 for n = 3, 2^6 beyond
};

struct QuadratureResult {
    cplx value;
    std::size_t nodes_per_dim = 0;
    double est_error = 0.0;
    bool converged = false;
    ContourSpec contour;
};

using Integrand = std::function<cplx(std::span<const cplx>)>;

// (2 pi i)^{-n} times the integral of f over the product of circles, by the
// tensor trapezoid rule with node doubling. est_error is the difference of
// the last two levels; doubling stops once it is <= tol after at least two
// comparisons and below the previous difference.
QuadratureResult integrate(const Integrand& f, const ContourSpec& contours, const QuadratureOptions& opts = {});

// Radius 1 + 1/sqrt(t) (at most 2) for the v-variable formulas: keeps
// |exp(t(v - 2 + 1/v))| of order one on the circle for large t.
double leader_radius(double t);

// Probability of M_C(t) = mu given M_C(0) = nu. Decreasing nu uses the
// factorized psi; other nu use the psi recursion.
QuadratureResult prob_M_C(const LeaderRecord& nu, const LeaderRecord& mu, double t,
                          const QuadratureOptions& opts = {});

// Single-leader and two-leader probabilities, all in v = 1 + w variables.
QuadratureResult prob_leader_type_ge(Int k1, Int k2, double t, const QuadratureOptions& opts = {});
QuadratureResult prob_leader_type_ge_at(Int k1, Int k2, Int x, double t, const QuadratureOptions& opts = {});
QuadratureResult prob_two_leaders_gt(Int k1, Int k2, Int k3, double t, const QuadratureOptions& opts = {});
QuadratureResult prob_two_leaders_between(Int k1, Int k2, Int k3, double t, const QuadratureOptions& opts = {});
QuadratureResult prob_adjacent_inverted(double t, const QuadratureOptions& opts = {});

// Throws NonProbability unless |Im| and the distance of Re from [0, 1] are
// within tol + est_error.
void require_probability(const QuadratureResult& r, double tol);

}  // namespace mtasep
