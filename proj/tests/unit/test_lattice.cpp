#include "doctest.h"

#include <algorithm>
#include <random>

#include "mtasep/errors.hpp"
#include "mtasep/lattice.hpp"

using namespace mtasep;

namespace {

Configuration example_config() {
    return Configuration(-4, 2, {0, 4, -1, 3, -2, 1, 2});
}

// Random reachable state: random admissible swaps from the step state.
Configuration random_state(std::mt19937_64& rng, Int lo, Int hi, int swaps) {
    Configuration s = Configuration::step(lo, hi);
    std::vector<Int> c = s.cells();
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 2);
    for (int i = 0; i < swaps; ++i) {
        std::size_t b = pick(rng);
        if (c[b] > c[b + 1]) std::swap(c[b], c[b + 1]);
    }
    return Configuration(lo, hi, c);
}

}  // namespace

TEST_CASE("M_C of the step state") {
    auto s = Configuration::step(-10, 10);
    CHECK(compute_M_C(s, ColorCutoffs({2, 5})) == LeaderRecord{-2, -5});
    CHECK(compute_M_C(s, ColorCutoffs({-3, 0, 1, 7})) == LeaderRecord{3, 0, -1, -7});
    // Cutoffs outside the window use the analytic continuation.
    CHECK(compute_M_C(s, ColorCutoffs({-20, 40})) == LeaderRecord{20, -40});
}

TEST_CASE("M_C and leaders on the worked configuration") {
    auto e = example_config();
    CHECK(compute_M_C(e, ColorCutoffs({0})) == LeaderRecord{2});
    CHECK(leader(e, 0, 1) == LeaderInfo{2, 2});
    CHECK(leader(e, 0, 2) == LeaderInfo{1, 1});
    CHECK(leader(e, 3, 1) == LeaderInfo{-1, 3});
    CHECK(compute_M_C(e, ColorCutoffs({0, 3})) == LeaderRecord{2, -1});
    CHECK(compute_M_C(e, ColorCutoffs({1, 2})) == LeaderRecord{1, 2});
}

TEST_CASE("leader of the step state") {
    auto s = Configuration::step(-5, 5);
    for (Int k = -8; k <= 8; ++k) CHECK(leader(s, k, 1) == LeaderInfo{-k, k});
}

TEST_CASE("height functions") {
    auto s = Configuration::step(-10, 10);
    CHECK(height(s, 0, 0) == HeightTriple{1, 0, 1});
    CHECK(height(s, -3, 0) == HeightTriple{1, 3, 4});
    CHECK(height(example_config(), 1, 0) == HeightTriple{1, 1, 2});
    // Same answers when the queried sites leave the window.
    auto small = Configuration::step(-1, 1);
    CHECK(height(small, -3, 0) == HeightTriple{1, 3, 4});
    CHECK(height(small, 5, -8) == HeightTriple{1, 3, 4});
    CHECK(height(s, 5, -8) == HeightTriple{1, 3, 4});
}

TEST_CASE("height invariants on random states") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 200; ++it) {
        auto c = random_state(rng, -6, 6, 80);
        for (Int cut = -9; cut <= 9; ++cut)
            for (Int k = -9; k <= 9; ++k) {
                auto h = height(c, cut, k);
                CHECK(h.h_geq == h.h_eq + h.h_gt);
                CHECK(h.h_eq <= 1);
            }
    }
}

TEST_CASE("M_C coordinates distinct and leader consistent") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 300; ++it) {
        auto c = random_state(rng, -8, 8, 150);
        LeaderRecord m = compute_M_C(c, ColorCutoffs({-2, 0, 1, 3}));
        auto sorted = m;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        for (Int k = -4; k <= 4; ++k)
            CHECK(leader(c, k, 1).position == compute_M_C(c, ColorCutoffs({k}))[0]);
    }
}

TEST_CASE("observable on the step state") {
    auto s = Configuration::step(-10, 10);
    for (Int b = -3; b <= 3; ++b) CHECK(observable_O(s, ColoredComposition({-b - 1}, {b})) == 1);
    // Colour b sits at -b < m+1.
    CHECK(observable_O(s, ColoredComposition({5}, {0})) == 0);
}

TEST_CASE("observable identity on random states") {
    std::mt19937_64 rng(2024);
    int ones = 0;
    for (int it = 0; it < 2000; ++it) {
        auto c = random_state(rng, -7, 7, 120);
        const std::size_t n = 1 + rng() % 3;
        std::vector<Int> parts, colors;
        while (parts.size() < n) {
            Int p = static_cast<Int>(rng() % 9) - 4;
            if (std::find(parts.begin(), parts.end(), p) != parts.end()) continue;
            parts.push_back(p);
            colors.push_back(static_cast<Int>(rng() % 9) - 4);
        }
        // Distinct colours keep the M_C side well-defined.
        std::sort(colors.begin(), colors.end());
        if (std::adjacent_find(colors.begin(), colors.end()) != colors.end()) continue;
        std::shuffle(colors.begin(), colors.end(), rng);
        ColoredComposition kappa(parts, colors);
        auto target = observable_target(kappa);
        int rhs = compute_M_C(c.inverse(), target.cutoffs) == target.colors ? 1 : 0;
        int lhs = observable_O(c, kappa);
        CHECK(lhs == rhs);
        ones += lhs;
    }
    CHECK(ones > 0);
}

TEST_CASE("inverse") {
    auto e = example_config();
    auto inv = e.inverse();
    CHECK(inv.lo() == -2);
    CHECK(inv.hi() == 4);
    for (Int x = -4; x <= 2; ++x) CHECK(inv.at(e.at(x)) == x);
    CHECK(inv.inverse() == e);
    Configuration clamped = Configuration::step(-3, 3, TypeClamp{-1, 1});
    CHECK_THROWS_AS(clamped.inverse(), NotInvertible);
}

TEST_CASE("projections of the worked configuration") {
    auto e = example_config();
    CHECK(project_voter(e) == std::vector<Int>{0, 0, -1, -1, -2, -2, -2});
    CHECK(project_coalescence(e) == std::vector<Int>{1, 0, 1, 0, 1, 0, 0});
    CHECK(project_ranking(e) == std::vector<Int>{1, 2, 1, 3, 1, 4, 5});
    auto s = Configuration::step(-4, 4);
    CHECK(project_voter(s) == std::vector<Int>{4, 3, 2, 1, 0, -1, -2, -3, -4});
    CHECK(project_coalescence(s) == std::vector<Int>(9, 1));
    CHECK(project_ranking(s) == std::vector<Int>(9, 1));
}

TEST_CASE("projection relations on random states") {
    std::mt19937_64 rng(77);
    for (int it = 0; it < 300; ++it) {
        auto c = random_state(rng, -10, 10, 300);
        auto v = project_voter(c);
        auto z = project_coalescence(c);
        auto r = project_ranking(c);
        for (std::size_t i = 0; i < v.size(); ++i) {
            Int prev = i == 0 ? 1 - c.lo() : v[i - 1];
            CHECK((z[i] == 1) == (v[i] != prev));
            CHECK((r[i] == 1) == (z[i] == 1));
        }
    }
}

TEST_CASE("constructor validation") {
    CHECK_THROWS(Configuration(0, -1, {}));
    CHECK_THROWS(Configuration(0, 1, {0}));
    CHECK_THROWS(Configuration(0, 1, {0, 5}));
    CHECK_THROWS(ColorCutoffs({1, 1}));
    CHECK_THROWS(ColorCutoffs(std::vector<Int>{}));
    CHECK_THROWS(ColoredComposition({1, 1}, {0, 1}));
    auto f = Configuration(0, 2, {kHole, 3, kHole}, Boundary::Frozen);
    CHECK_THROWS_AS(compute_M_C(f, ColorCutoffs({0, 1})), EmptyLevel);
    CHECK(compute_M_C(f, ColorCutoffs({0})) == LeaderRecord{1});
}

TEST_CASE("clamped configuration keeps leaders of in-range cutoffs") {
    TypeClamp cl{0, 6};
    std::mt19937_64 rng(3);
    for (int it = 0; it < 100; ++it) {
        auto full = random_state(rng, -12, 12, 400);
        std::vector<Int> cells;
        for (Int v : full.cells()) cells.push_back(cl(v));
        Configuration proj(-12, 12, cells, Boundary::RainbowStep, cl);
        for (Int k = 0; k <= 7; ++k) CHECK(leader(proj, k, 1).position == leader(full, k, 1).position);
    }
}
