#pragma once

namespace mtasep {

// Rescaled type a of the leader: survival 1 - erf(a/2), density
// exp(-a^2/4)/sqrt(pi) on a >= 0.
double survival_leader(double a);
double density_leader(double a);

// Joint law of (position, type) of the leader in the x, a scaling:
// S(x, a) = (1 + erf((-x-a)/sqrt2) + (1 - erf(-x/sqrt2)) exp(-a x - a^2/2)) / 2,
// the conditional survival of the type given position x.
double joint_position_type_survival(double x, double a);
// -d/da S(x, a) in closed form.
double conditional_type_density(double a, double x);

// Limiting joint density of (L1, L2) levels: a2 for the leader, a3 for the
// second leader. Discontinuous across a2 = a3.
double joint_two_leader_density(double a2, double a3);
double two_leader_d1(double a2, double a3);  // branch used for a2 > a3, arguments (L2, L1)
double two_leader_d2(double a2, double a3);  // branch used for a2 < a3, arguments (L2, L1)

struct LineQuadrature {
    double shift = 0.7;   // both variables on Im x = -shift
    double step = 0.05;
    double half_width = 9.0;
    double tol = 1e-10;   // fine vs. every-other-node sum
};

// Limit tails as double integrals over shifted real lines:
//   oracle_Y(a2, a3)    = lim P(L1 >= a2, L2 >= a3),
//   oracle_Yhat(a2, a3) = lim P(a2 <= L1 < a3, L2 >= a3).
// Their mixed second derivatives equal G on a2 > a3 and a2 < a3 respectively.
double oracle_Y(double a2, double a3, const LineQuadrature& q = {});
double oracle_Yhat(double a2, double a3, const LineQuadrature& q = {});

// 3 sqrt(3) / (4 pi) and the Gaussian double integral it comes from.
double leader_changes_constant();
double leader_changes_integral(const LineQuadrature& q = {0.6, 0.04, 9.0, 1e-10});

}  // namespace mtasep
