#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <map>

#include "mtasep/ctmc.hpp"
#include "mtasep/errors.hpp"

using namespace mtasep;

namespace {

double poisson_pmf(Int m, double t) {
    return std::exp(-t + static_cast<double>(m) * std::log(t) - std::lgamma(static_cast<double>(m) + 1));
}

}  // namespace

TEST_CASE("single particle is Poisson") {
    for (double t : {0.3, 1.0, 2.5}) {
        auto d = ctmc_distribution({0}, t, 1e-12);
        for (Int m = 0; m < 12; ++m)
            CHECK(transition_probability({0}, {m}, t, 1e-12).value == doctest::Approx(poisson_pmf(m, t)).epsilon(1e-12));
        CHECK(d.loss <= 0.5e-12);
    }
}

TEST_CASE("time zero is the identity") {
    CHECK(transition_probability({0, 1}, {0, 1}, 0.0, 1e-9).value == 1.0);
    CHECK(transition_probability({0, 1}, {0, 2}, 0.0, 1e-9).value == 0.0);
}

TEST_CASE("only the higher colour can move from (0,1)") {
    for (double t : {1e-3, 1e-2}) {
        double p = transition_probability({0, 1}, {0, 1}, t, 1e-13).value;
        CHECK(std::abs(p - (1 - t)) < t * t);
        CHECK(p == doctest::Approx(std::exp(-t)).epsilon(1e-10));
    }
}

TEST_CASE("mass and shift equivariance") {
    NParticleState start = {2, 0, -1};
    auto d = ctmc_distribution(start, 1.0, 1e-10);
    double total = 0;
    for (const auto& [s, p] : d.prob) total += p;
    CHECK(std::abs(1 - total - d.loss) < 1e-12);
    CHECK(d.loss <= 0.5e-10);
    auto shifted = ctmc_distribution({7, 5, 4}, 1.0, 1e-10);
    for (const auto& [s, p] : d.prob) {
        NParticleState q = s;
        for (auto& x : q) x += 5;
        CHECK(shifted.prob.at(q) == doctest::Approx(p).epsilon(1e-13));
    }
}

TEST_CASE("budget cap") {
    CtmcLimits lim;
    lim.max_jumps = 5;
    CHECK_THROWS_AS(ctmc_distribution({0, 1}, 4.0, 1e-9, lim), BudgetInfeasible);
}

TEST_CASE("agrees with the n-particle sampler") {
    NParticleState start = {0, -1};
    const double t = 1.0;
    auto d = ctmc_distribution(start, t, 1e-10);
    const int reps = 40000;
    std::map<NParticleState, int> counts;
    for (int r = 0; r < reps; ++r) ++counts[simulate_nparticle(start, t, ClockStream(21, r))];
    for (const auto& [s, p] : d.prob) {
        if (p < 1e-3) continue;
        const double f = static_cast<double>(counts[s]) / reps;
        CHECK(std::abs(f - p) < 4 * std::sqrt(p * (1 - p) / reps));
    }
}

TEST_CASE("cache round trip") {
    const std::string path = "ctmc_cache_test.json";
    std::remove(path.c_str());
    double direct = transition_probability({0, -1}, {1, 0}, 1.0, 1e-9).value;
    {
        CtmcCache c(path);
        CHECK(c.probability({0, -1}, {1, 0}, 1.0, 1e-9).value == direct);
        c.save();
    }
    CtmcCache again(path);
    CHECK(again.probability({0, -1}, {1, 0}, 1.0, 1e-9).value == direct);
    std::remove(path.c_str());
}
