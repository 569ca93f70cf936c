#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtasep/lattice.hpp"
#include "mtasep/rng.hpp"

namespace mtasep {

inline constexpr double kDefaultDelta = 1e-6;

// Smallest W with P(Poisson(t) >= W) <= delta. Along any influence path the
// number of rings in time t is Poisson(t), so disturbances travel fewer than W
// sites except with probability delta.
Int window_radius(double t, double delta = kDefaultDelta);

struct Window {
    Int lo;
    Int hi;
};

// Window for leader observables of a clamped system with types in
// [floor, ceiling] kept distinct: the top block starts at -ceiling-1 and the
// floor-leader never passes -floor + W.
Window leader_window(Int floor, Int ceiling, double t, double delta = kDefaultDelta);

// Default ceiling: P(type of the floor-leader > ceiling) <= P(Poisson(t) >= ceiling-floor+1) <= delta.
Int default_ceiling(Int floor, double t, double delta = kDefaultDelta);

struct SwapEvent {
    double t;
    Int bond;   // left site x of the bond (x, x+1)
    Int left;   // pre-swap type at x
    Int right;  // pre-swap type at x+1
};

using Observer = std::function<void(const SwapEvent&)>;

struct EventLog {
    double horizon = 0.0;
    std::vector<SwapEvent> events;

    void write_jsonl(std::ostream& os) const;
    static EventLog read_jsonl(std::istream& is, double horizon);
};

struct SimOptions {
    double delta = kDefaultDelta;
    // Sites whose law must match the infinite system; the window must extend
    // window_radius(t, delta) beyond them on both sides.
    std::optional<Window> observed;
};

Configuration simulate_tasep(const Configuration& init, double t, const ClockStream& clocks,
                             std::span<const Observer> observers = {}, const SimOptions& opts = {});

Configuration simulate_tasep(const Configuration& init, double t, const ClockStream& clocks,
                             EventLog* log, const SimOptions& opts = {});

using NParticleState = std::vector<Int>;

// Colours 1..n, colour i at start[i-1]. Right jumps at rate 1; blocked by a
// weakly higher colour, swapping with a strictly lower one.
NParticleState simulate_nparticle(const NParticleState& start, double t, const ClockStream& clocks);

// Native dynamics on [lo, hi] from the fully packed / step states.
std::vector<Int> simulate_voter(Window w, double t, const ClockStream& clocks,
                                const SimOptions& opts = {});
std::vector<Int> simulate_coalescence(Window w, double t, const ClockStream& clocks,
                                      const SimOptions& opts = {});

// Ranking process via its own local rule: (a, b) -> (b, a+1) when a >= b.
std::vector<Int> simulate_ranking(Window w, double t, const ClockStream& clocks);

// Type changes of the k-leader, updated in O(1) per accepted swap.
class LeaderChangeCounter {
public:
    LeaderChangeCounter(const Configuration& init, Int k);

    void operator()(const SwapEvent& e) { observe(e.bond, e.left, e.right); }
    void observe(Int bond, Int left, Int /*right*/) {
        if (bond + 1 == pos_) {
            type_ = left;
            ++changes_;
        } else if (bond == pos_) {
            ++pos_;
        }
    }

    Int changes() const { return changes_; }
    Int position() const { return pos_; }
    Int type() const { return type_; }

private:
    Int pos_;
    Int type_;
    Int changes_ = 0;
};

Int count_leader_changes(const Configuration& init, const EventLog& log, Int k);

// E_0 forms: leftmost i <= 0 whose opinion block reaches 0, and rightmost
// occupied nonpositive site. Both take values on window [lo, hi].
Int e0_voter(const std::vector<Int>& opinions, Int lo);
Int e0_coalescence(const std::vector<Int>& occupied, Int lo);

struct MCEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    double elapsed = 0.0;
};

// Pairwise summation over replica-ordered values.
MCEstimate summarize(std::span<const double> values, std::uint64_t seed, double elapsed = 0.0);

}  // namespace mtasep
