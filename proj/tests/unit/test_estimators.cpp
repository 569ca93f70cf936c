#include "doctest.h"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mtasep/estimators.hpp"

using namespace mtasep;

namespace {

double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("leader events on the step state") {
    const auto s = Configuration::step(-10, 10);
    CHECK_FALSE(leader_event(s, {LeaderEventKind::TypeGe, 0, 1}));
    CHECK(leader_event(s, {LeaderEventKind::TypeGe, 0, 0}));
    CHECK(leader_event(s, {LeaderEventKind::AdjacentInverted}));
    CHECK_FALSE(leader_event(s, {LeaderEventKind::TwoLeadersGt, 0, 1, 2}));
    for (auto k : {LeaderEventKind::TypeGe, LeaderEventKind::TypeGeAt, LeaderEventKind::TwoLeadersGt,
                   LeaderEventKind::TwoLeadersBetween, LeaderEventKind::AdjacentInverted})
        CHECK(parse_leader_event(to_string(k)) == k);
    CHECK_FALSE(parse_leader_event("nope").has_value());
}

TEST_CASE("leader event frequencies match quadrature at t = 1") {
    McOptions o;
    o.reps = 20000;
    o.seed = 41;
    const std::vector<LeaderEventSpec> specs = {
        {LeaderEventKind::TypeGe, 0, 2},           {LeaderEventKind::TypeGeAt, 0, 1, 0, 1},
        {LeaderEventKind::TwoLeadersGt, 0, 1, 2},  {LeaderEventKind::TwoLeadersBetween, 0, 1, 2},
        {LeaderEventKind::AdjacentInverted},
    };
    for (const auto& s : specs) {
        const double q = leader_event_quadrature(s, 1.0).value.real();
        const double p = mean(leader_event_samples(s, 1.0, o));
        const double se = std::sqrt(q * (1 - q) / static_cast<double>(o.reps));
        CHECK(std::abs(p - q) < 4 * se);
    }
}

TEST_CASE("tail ceiling is the first level below delta") {
    for (double t : {1.0, 25.0}) {
        const Int c = tail_ceiling(0, t, 1e-6);
        CHECK(prob_leader_type_ge(0, c + 1, t).value.real() <= 1e-6);
        CHECK(prob_leader_type_ge(0, c, t).value.real() > 1e-6);
        CHECK(c <= default_ceiling(0, t, 1e-6));
    }
    CHECK(tail_ceiling(3, 0.0, 1e-6) == 3);
}

TEST_CASE("expected leader changes integrate the adjacent inversion probability") {
    McOptions o;
    o.reps = 20000;
    o.seed = 43;
    const auto rows = leader_change_samples(0, {0.5, 2.0}, o);
    std::vector<double> s2;
    for (const auto& r : rows) {
        CHECK(r[0] <= r[1]);
        s2.push_back(static_cast<double>(r[1]));
    }
    const double expected = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [](double s) { return prob_adjacent_inverted(s).value.real(); }, 0.0, 2.0, 5, 1e-10);
    const double m = mean(s2);
    double var = 0;
    for (double x : s2) var += (x - m) * (x - m);
    var /= static_cast<double>(s2.size() - 1);
    CHECK(std::abs(m - expected) < 4 * std::sqrt(var / static_cast<double>(s2.size())));
    for (const auto& r : leader_change_samples(0, {0.0}, {10, 1, 1, 1e-6})) CHECK(r[0] == 0);
}

TEST_CASE("minus E0 has the law of the leader type") {
    McOptions o;
    o.reps = 20000;
    o.seed = 47;
    for (auto proc : {E0Process::Voter, E0Process::Coalescence}) {
        const auto v = e0_samples(proc, 2.0, o);
        for (Int k = 1; k <= 3; ++k) {
            double hits = 0;
            for (double x : v) hits += x >= static_cast<double>(k);
            const double p = hits / static_cast<double>(v.size());
            const double q = prob_leader_type_ge(0, k, 2.0).value.real();
            CHECK(std::abs(p - q) < 4 * std::sqrt(q * (1 - q) / static_cast<double>(v.size())));
        }
    }
}

TEST_CASE("KS distance") {
    auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_distance({0.5}, uniform) == doctest::Approx(0.5));
    CHECK(ks_distance({0.25, 0.75}, uniform) == doctest::Approx(0.25));
    // Ties form a single jump.
    CHECK(ks_distance({0.5, 0.5}, uniform) == doctest::Approx(0.5));
}
