#include "mtasep/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mtasep/errors.hpp"
#include "mtasep/rational.hpp"

namespace mtasep {

namespace {

std::size_t default_cap(std::size_t n) {
    if (n <= 2) return std::size_t{1} << 12;
    if (n == 3) return std::size_t{1} << 9;
    return std::size_t{1} << 6;
}

cplx trapezoid(const Integrand& f, const ContourSpec& c, std::size_t N) {
    const std::size_t n = c.circles.size();
    // Node table per dimension: w_k and the weight (w_k - center)/N.
    std::vector<std::vector<cplx>> nodes(n), weights(n);
    for (std::size_t d = 0; d < n; ++d) {
        nodes[d].resize(N);
        weights[d].resize(N);
        for (std::size_t k = 0; k < N; ++k) {
            const cplx u = std::polar(c.circles[d].radius, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(N));
            nodes[d][k] = c.circles[d].center + u;
            weights[d][k] = u / static_cast<double>(N);
        }
    }
    std::vector<std::size_t> idx(n, 0);
    std::vector<cplx> w(n);
    // Sum the innermost dimension per row, then rows in order.
    cplx total = 0;
    if (n == 0) return f(w);
    for (;;) {
        cplx outer_w = 1;
        for (std::size_t d = 0; d + 1 < n; ++d) {
            w[d] = nodes[d][idx[d]];
            outer_w *= weights[d][idx[d]];
        }
        cplx row = 0;
        for (std::size_t k = 0; k < N; ++k) {
            w[n - 1] = nodes[n - 1][k];
            row += f(w) * weights[n - 1][k];
        }
        total += outer_w * row;
        std::size_t d = n - 1;
        for (;;) {
            if (d == 0) return total;
            --d;
            if (++idx[d] < N) break;
            idx[d] = 0;
        }
    }
}

}  // namespace

QuadratureResult integrate(const Integrand& f, const ContourSpec& contours, const QuadratureOptions& opts) {
    const std::size_t n = contours.circles.size();
    if (n == 0) throw std::invalid_argument("integrate: no variables");
    for (const auto& c : contours.circles)
        if (!(c.radius > 0)) throw std::invalid_argument("integrate: nonpositive radius");
    const std::size_t cap = opts.max_nodes ? opts.max_nodes : default_cap(n);
    QuadratureResult res;
    res.contour = contours;
    std::size_t N = std::max<std::size_t>(4, opts.min_nodes);
    cplx prev = trapezoid(f, contours, N);
    double prev_diff = INFINITY;
    for (;;) {
        const std::size_t next = 2 * N;
        if (next > cap) break;
        const cplx cur = trapezoid(f, contours, next);
        const double diff = std::abs(cur - prev);
        N = next;
        prev = cur;
        res.value = cur;
        res.nodes_per_dim = N;
        res.est_error = diff;
        // A lone small difference at the first comparison can be aliasing.
        if (diff <= opts.tol && std::isfinite(prev_diff) && (prev_diff <= opts.tol || diff < prev_diff)) {
            res.converged = true;
            return res;
        }
        prev_diff = diff;
    }
    res.converged = res.est_error <= opts.tol;
    if (res.nodes_per_dim == 0) {
        res.value = prev;
        res.nodes_per_dim = N;
        res.est_error = INFINITY;
    }
    return res;
}

double leader_radius(double t) {
    if (t <= 0) return 2.0;
    return std::min(2.0, 1.0 + 1.0 / std::sqrt(t));
}

void require_probability(const QuadratureResult& r, double tol) {
    const double slack = tol + r.est_error;
    const double re = r.value.real();
    if (std::abs(r.value.imag()) > slack || re < -slack || re > 1 + slack)
        throw NonProbability("quadrature value (" + std::to_string(re) + ", " + std::to_string(r.value.imag()) +
                             ") is not a probability");
}

namespace {

void check_time(double t) {
    if (!(t >= 0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and >= 0");
}

QuadratureResult finish(QuadratureResult r, const QuadratureOptions& opts) {
    require_probability(r, std::max(opts.tol, 1e-12));
    return r;
}

cplx ipow(cplx z, Int e) {
    if (e < 0) return 1.0 / ipow(z, -e);
    cplx r = 1, b = z;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

bool distinct(const LeaderRecord& v) {
    LeaderRecord s = v;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
}

// Two-leader exponential factor exp(t(1/(v2 v3) + v2 + v3 - 3)).
cplx two_leader_exp(double t, cplx v2, cplx v3) {
    return std::exp(t * (1.0 / (v2 * v3) + v2 + v3 - 3.0));
}

ContourSpec two_circles(double rho) {
    return ContourSpec{{Circle{0.0, rho}, Circle{0.0, rho}}};
}

// Peak of |f| times the contour lengths over a coarse probe grid; bounds the
// cancellation error of the trapezoid sum.
double probe_peak(const Integrand& f, const ContourSpec& c) {
    constexpr std::size_t kProbe = 12;
    const std::size_t n = c.circles.size();
    std::vector<std::size_t> idx(n, 0);
    std::vector<cplx> w(n);
    double peak = 0;
    for (;;) {
        double scale = 1;
        for (std::size_t d = 0; d < n; ++d) {
            // Offset probe angles avoid the real axis, where poles sit.
            const double th = 2 * std::numbers::pi * (static_cast<double>(idx[d]) + 0.37) / kProbe;
            w[d] = c.circles[d].center + std::polar(c.circles[d].radius, th);
            scale *= c.circles[d].radius;
        }
        peak = std::max(peak, std::abs(f(w)) * scale);
        std::size_t d = 0;
        for (; d < n; ++d) {
            if (++idx[d] < kProbe) break;
            idx[d] = 0;
        }
        if (d == n) return peak;
    }
}

ContourSpec pick_contour(const Integrand& f, const std::vector<ContourSpec>& candidates) {
    std::size_t best = 0;
    double best_peak = INFINITY;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double p = probe_peak(f, candidates[i]);
        if (p < best_peak) {
            best_peak = p;
            best = i;
        }
    }
    return candidates[best];
}

// Staggered radii R(1 + j kappa) keep node tuples away from the removable
// w_i = w_j set; R comes from a ladder.
ContourSpec staggered_contour(const Integrand& f, std::size_t n) {
    constexpr double kStagger = 0.0618033988749895;
    std::vector<ContourSpec> cands;
    for (double R : {1.2, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0}) {
        ContourSpec c;
        for (std::size_t j = 0; j < n; ++j)
            c.circles.push_back(Circle{0.0, R * (1.0 + kStagger * static_cast<double>(j))});
        cands.push_back(std::move(c));
    }
    return pick_contour(f, cands);
}

}  // namespace

QuadratureResult prob_M_C(const LeaderRecord& nu, const LeaderRecord& mu, double t, const QuadratureOptions& opts) {
    check_time(t);
    const std::size_t n = nu.size();
    if (n == 0 || mu.size() != n) throw std::invalid_argument("prob_M_C: tuple sizes");
    if (!distinct(nu) || !distinct(mu)) throw std::invalid_argument("prob_M_C: coordinates must be distinct");
    const bool decreasing = std::is_sorted(nu.begin(), nu.end(), std::greater<Int>());
    Integrand f = [&](std::span<const cplx> w) {
        cplx v = 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) v *= 1.0 - w[i] / w[j];
        v *= eval_phi<double>(mu, w);
        if (decreasing) {
            for (std::size_t j = 0; j < n; ++j)
                v *= ipow(1.0 + w[j], nu[j] - static_cast<Int>(n - j));
        } else {
            v *= eval_psi<double>(nu, w);
            for (std::size_t j = 0; j < n; ++j) v *= ipow(1.0 + w[j], -static_cast<Int>(n - j));
        }
        cplx s = 0;
        for (std::size_t j = 0; j < n; ++j) s += w[j];
        return v * std::exp(t * s);
    };
    return finish(integrate(f, staggered_contour(f, n), opts), opts);
}

QuadratureResult prob_leader_type_ge(Int k1, Int k2, double t, const QuadratureOptions& opts) {
    check_time(t);
    if (k2 <= k1) throw std::invalid_argument("prob_leader_type_ge: need k2 > k1");
    const Int e = k1 - k2 - 1;
    Integrand f = [=](std::span<const cplx> v) {
        const cplx z = v[0];
        return (z + 1.0) / (z - 1.0) * ipow(z, e) * std::exp(t * (z - 2.0 + 1.0 / z));
    };
    return finish(integrate(f, ContourSpec{{Circle{0.0, leader_radius(t)}}}, opts), opts);
}

QuadratureResult prob_leader_type_ge_at(Int k1, Int k2, Int x, double t, const QuadratureOptions& opts) {
    check_time(t);
    if (k2 <= k1) throw std::invalid_argument("prob_leader_type_ge_at: need k2 > k1");
    const Int e1 = -k1 - x - 1, e2 = -k2 - x - 1;
    Integrand f = [=](std::span<const cplx> w) {
        return (w[0] - w[1]) / (w[0] * w[1]) * ipow(1.0 + w[0], e1) * ipow(1.0 + w[1], e2) *
               std::exp(t * (w[0] + w[1]));
    };
    // w1 around -1 only; w2 around -1 and 0.
    std::vector<ContourSpec> cands;
    for (double r1 : {0.5, 0.7, 0.9})
        for (double r2 : {1.5, 2.0, 3.0, 4.0, 6.0}) cands.push_back(ContourSpec{{Circle{-1.0, r1}, Circle{-1.0, r2}}});
    return finish(integrate(f, pick_contour(f, cands), opts), opts);
}

QuadratureResult prob_two_leaders_gt(Int k1, Int k2, Int k3, double t, const QuadratureOptions& opts) {
    check_time(t);
    if (!(k1 < k2 && k2 < k3)) throw std::invalid_argument("prob_two_leaders_gt: need k1 < k2 < k3");
    const Int e2 = k1 - k2, e3 = k1 - k3;
    Integrand f = [=](std::span<const cplx> v) {
        const cplx a = v[0], b = v[1];
        const cplx num = (b - a) * (a * b * b - 1.0) * (a * a * b - 1.0) * ipow(a, e2) * ipow(b, e3);
        const cplx den = a * a * b * (a * b - 1.0) * (a - 1.0) * (b - 1.0) * (b - 1.0) * (b - 1.0);
        return num / den * two_leader_exp(t, a, b);
    };
    return finish(integrate(f, two_circles(leader_radius(t)), opts), opts);
}

QuadratureResult prob_two_leaders_between(Int k1, Int k2, Int k3, double t, const QuadratureOptions& opts) {
    check_time(t);
    if (!(k1 < k2 && k2 < k3)) throw std::invalid_argument("prob_two_leaders_between: need k1 < k2 < k3");
    const Int e2 = k1 - k2 - 1, e3 = k1 - k3 - 1;
    Integrand f = [=](std::span<const cplx> v) {
        const cplx a = v[0], b = v[1];
        const cplx num = (b - a) * (a * b * b - 1.0) * (a * a * b - 1.0) * ipow(a, e2) * ipow(b, e3);
        const cplx den = (a - 1.0) * (a - 1.0) * (b - 1.0) * (b - 1.0) * (a * b - 1.0);
        return num / den * two_leader_exp(t, a, b);
    };
    return finish(integrate(f, two_circles(leader_radius(t)), opts), opts);
}

QuadratureResult prob_adjacent_inverted(double t, const QuadratureOptions& opts) {
    check_time(t);
    Integrand f = [=](std::span<const cplx> v) {
        const cplx a = v[0], b = v[1];
        const cplx num = (b - a) * (a * b * b - 1.0) * (a * a * b - 1.0);
        const cplx den = a * b * b * (a - 1.0) * (b - 1.0) * (a * b - 1.0) * (a * b - 1.0);
        return num / den * two_leader_exp(t, a, b);
    };
    return finish(integrate(f, two_circles(leader_radius(t)), opts), opts);
}

}  // namespace mtasep
