#include "doctest.h"

#include <cmath>
#include <sstream>

#include "mtasep/errors.hpp"
#include "mtasep/parallel.hpp"
#include "mtasep/rng.hpp"
#include "mtasep/samplers.hpp"

using namespace mtasep;

TEST_CASE("philox known answer") {
    auto out = philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
    auto ff = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(ff[0] == 0x408f276du);
    CHECK(ff[1] == 0x41c83b0eu);
    CHECK(ff[2] == 0xa20bc7c6u);
    CHECK(ff[3] == 0x6d5451fdu);
}

TEST_CASE("clock streams are reproducible and lane separated") {
    ClockStream a(9, 3), b(9, 3), c(9, 4);
    CHECK(a.exponential(-5, 17) == b.exponential(-5, 17));
    CHECK(a.exponential(-5, 17) != c.exponential(-5, 17));
    CHECK(a.exponential(-5, 17) != a.exponential(5, 17));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    double s = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) s += a.exponential(i % 7, static_cast<std::uint64_t>(i));
    CHECK(std::abs(s / n - 1.0) < 0.01);
}

TEST_CASE("window radius is the Poisson upper quantile") {
    CHECK(window_radius(0) == 1);
    // P(Pois(1) >= w): w=9 gives 1.1e-6, w=10 gives 1.0e-7.
    CHECK(window_radius(1, 1e-6) == 10);
    Int w = window_radius(400, 1e-6);
    CHECK(w > 400);
    CHECK(w < 400 + 6 * 20);
}

TEST_CASE("tasep at t=0 is the step state") {
    auto s = Configuration::step(-20, 20);
    ClockStream clk(1, 0);
    CHECK(simulate_tasep(s, 0.0, clk) == s);
}

TEST_CASE("window too small is rejected") {
    auto s = Configuration::step(-5, 5);
    SimOptions opts;
    opts.observed = Window{-1, 1};
    ClockStream clk(1, 0);
    CHECK_THROWS_AS(simulate_tasep(s, 3.0, clk, nullptr, opts), WindowTooSmall);
    auto big = Configuration::step(-40, 40);
    CHECK_NOTHROW(simulate_tasep(big, 3.0, clk, nullptr, opts));
}

TEST_CASE("tasep path invariants") {
    auto s = Configuration::step(-30, 30);
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
        ClockStream clk(123, rep);
        EventLog log;
        auto end = simulate_tasep(s, 2.0, clk, &log);
        // Conservation is enforced by the constructor; check ordering and monotone leader.
        for (std::size_t i = 1; i < log.events.size(); ++i) CHECK(log.events[i - 1].t <= log.events[i].t);
        for (const auto& e : log.events) CHECK(e.left > e.right);
        LeaderChangeCounter lc(s, 0);
        Int last_type = lc.type();
        for (const auto& e : log.events) {
            lc(e);
            CHECK(lc.type() >= last_type);
            last_type = lc.type();
        }
        CHECK(lc.position() == leader(end, 0, 1).position);
        CHECK(lc.type() == leader(end, 0, 1).type);
        // Replay gives the same final state.
        std::vector<Int> cells = s.cells();
        for (const auto& e : log.events) std::swap(cells[e.bond - s.lo()], cells[e.bond - s.lo() + 1]);
        CHECK(cells == end.cells());
        // Determinism.
        EventLog log2;
        auto end2 = simulate_tasep(s, 2.0, clk, &log2);
        CHECK(end2 == end);
        CHECK(log2.events.size() == log.events.size());
    }
}

TEST_CASE("event log JSONL round trip") {
    auto s = Configuration::step(-15, 15);
    ClockStream clk(8, 1);
    EventLog log;
    simulate_tasep(s, 1.5, clk, &log);
    std::stringstream ss;
    log.write_jsonl(ss);
    EventLog back = EventLog::read_jsonl(ss, 1.5);
    REQUIRE(back.events.size() == log.events.size());
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        CHECK(back.events[i].t == log.events[i].t);
        CHECK(back.events[i].bond == log.events[i].bond);
        CHECK(back.events[i].left == log.events[i].left);
        CHECK(back.events[i].right == log.events[i].right);
    }
}

TEST_CASE("leader change counter counts type changes only") {
    auto s = Configuration::step(-15, 15);
    for (std::uint64_t rep = 0; rep < 30; ++rep) {
        ClockStream clk(55, rep);
        EventLog log;
        simulate_tasep(s, 3.0, clk, &log);
        Int brute = 0;
        std::vector<Int> cells = s.cells();
        Int prev = leader(s, 0, 1).type;
        for (const auto& e : log.events) {
            std::swap(cells[e.bond - s.lo()], cells[e.bond - s.lo() + 1]);
            Int now = leader(Configuration(s.lo(), s.hi(), cells), 0, 1).type;
            if (now != prev) ++brute;
            prev = now;
        }
        CHECK(count_leader_changes(s, log, 0) == brute);
    }
    EventLog empty;
    CHECK(count_leader_changes(s, empty, 0) == 0);
}

TEST_CASE("clamped tasep matches the full leader law") {
    TypeClamp cl{-2, 8};
    Configuration full = Configuration::step(-30, 30);
    Configuration clamped = Configuration::step(-30, 30, cl);
    const int reps = 6000;
    double ma = 0, mb = 0, va = 0, vb = 0;
    for (int r = 0; r < reps; ++r) {
        double a = static_cast<double>(leader(simulate_tasep(full, 3.0, ClockStream(4, r)), 0, 1).type);
        double b = static_cast<double>(leader(simulate_tasep(clamped, 3.0, ClockStream(5, r)), 0, 1).type);
        ma += a; mb += b; va += a * a; vb += b * b;
    }
    ma /= reps; mb /= reps;
    va = va / reps - ma * ma;
    vb = vb / reps - mb * mb;
    CHECK(std::abs(ma - mb) < 4 * std::sqrt((va + vb) / reps));
}

TEST_CASE("no event on a bond by time 1") {
    auto s = Configuration::step(-20, 20);
    const int reps = 20000;
    int quiet = 0;
    for (int r = 0; r < reps; ++r) {
        ClockStream clk(31, static_cast<std::uint64_t>(r));
        EventLog log;
        simulate_tasep(s, 1.0, clk, &log);
        bool hit = false;
        for (const auto& e : log.events)
            if (e.bond == 0) hit = true;
        // Bond (0,1) is admissible from the start, so the first ring swaps it.
        quiet += hit ? 0 : 1;
    }
    const double p = std::exp(-1.0);
    const double se = std::sqrt(p * (1 - p) / reps);
    CHECK(std::abs(static_cast<double>(quiet) / reps - p) < 4 * se);
}

TEST_CASE("n-particle single walker is Poisson") {
    const int reps = 40000;
    double mean = 0, m2 = 0;
    for (int r = 0; r < reps; ++r) {
        ClockStream clk(77, static_cast<std::uint64_t>(r));
        Int x = simulate_nparticle({0}, 2.0, clk)[0];
        mean += static_cast<double>(x);
        m2 += static_cast<double>(x * x);
    }
    mean /= reps;
    const double var = m2 / reps - mean * mean;
    CHECK(std::abs(mean - 2.0) < 4 * std::sqrt(2.0 / reps));
    CHECK(std::abs(var - 2.0) < 0.1);
}

TEST_CASE("n-particle blocking rule") {
    // Colour 1 at 0 behind colour 2 at 1: colour 1 cannot pass colour 2.
    for (std::uint64_t r = 0; r < 2000; ++r) {
        ClockStream clk(5, r);
        auto p = simulate_nparticle({0, 1}, 1.5, clk);
        CHECK(p[0] < p[1]);
    }
    // Colour 2 behind colour 1 overtakes by swapping.
    int passed = 0;
    for (std::uint64_t r = 0; r < 2000; ++r) {
        ClockStream clk(6, r);
        auto p = simulate_nparticle({1, 0}, 1.5, clk);
        CHECK(p[0] != p[1]);
        passed += p[1] > p[0];
    }
    CHECK(passed > 0);
    CHECK_THROWS(simulate_nparticle({2, 2}, 1.0, ClockStream(1, 1)));
}

TEST_CASE("voter and coalescence native samplers") {
    ClockStream clk(3, 3);
    auto z0 = simulate_coalescence({-10, 10}, 0.0, clk);
    CHECK(z0 == std::vector<Int>(21, 1));
    CHECK(e0_coalescence(z0, -10) == 0);
    std::vector<Int> v = {7, 7, 4, 3, 3, 3, 9};  // sites -4..2
    CHECK(e0_voter(v, -4) == -1);
    for (std::uint64_t r = 0; r < 100; ++r) {
        ClockStream c(12, r);
        auto ops = simulate_voter({-40, 40}, 2.0, c);
        for (std::size_t i = 1; i < ops.size(); ++i) CHECK(ops[i - 1] >= ops[i]);
        auto z = simulate_coalescence({-40, 40}, 2.0, c);
        Int occ = 0;
        for (Int q : z) occ += q;
        CHECK(occ >= 1);
        // Coalescence is the border process of the voter model under the same clocks.
        for (std::size_t i = 1; i < ops.size(); ++i) CHECK((z[i] == 1) == (ops[i] != ops[i - 1]));
        auto rk = simulate_ranking({-40, 40}, 2.0, c);
        for (std::size_t i = 0; i < rk.size(); ++i) CHECK(rk[i] >= 1);
    }
}

TEST_CASE("summarize and deterministic replicas") {
    std::vector<double> v = {1, 2, 3, 4};
    auto e = summarize(v, 7);
    CHECK(e.mean == doctest::Approx(2.5));
    CHECK(e.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK_THROWS(summarize(std::vector<double>{1.0}, 0));
    auto f = [](std::size_t r) {
        ClockStream c(99, r);
        return c.exponential(0, 0);
    };
    auto a = run_replicas<double>(1000, 1, f);
    auto b = run_replicas<double>(1000, 4, f);
    auto d = run_replicas<double>(1000, 16, f);
    CHECK(a == b);
    CHECK(a == d);
}
