#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mtasep/contour.hpp"
#include "mtasep/lattice.hpp"
#include "mtasep/samplers.hpp"

namespace mtasep {

enum class LeaderEventKind { TypeGe, TypeGeAt, TwoLeadersGt, TwoLeadersBetween, AdjacentInverted };

const char* to_string(LeaderEventKind kind);
std::optional<LeaderEventKind> parse_leader_event(std::string_view name);

struct LeaderEventSpec {
    LeaderEventKind kind = LeaderEventKind::TypeGe;
    Int k1 = 0;
    Int k2 = 1;
    Int k3 = 2;
    Int x = 0;
};

// TypeGe: the k1-leader has type >= k2. TypeGeAt: additionally it sits at x.
// TwoLeadersGt: the k1-leader has type >= k3 and the (k1,2)-leader type >= k2.
// TwoLeadersBetween: the k1-leader has type in [k2, k3) and the (k1,2)-leader type >= k3.
// AdjacentInverted: the (0,2)-leader sits just behind the 0-leader with a larger type.
bool leader_event(const Configuration& config, const LeaderEventSpec& spec);

QuadratureResult leader_event_quadrature(const LeaderEventSpec& spec, double t, const QuadratureOptions& opts = {});

// Smallest c >= floor with P(type of the floor-leader at time t > c) <= delta,
// read off the single-leader quadrature.
Int tail_ceiling(Int floor, double t, double delta = kDefaultDelta);

struct McOptions {
    std::uint64_t reps = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double delta = kDefaultDelta;
};

// Clamped step state whose leader events with types in [floor, ceiling] match
// the infinite system up to delta.
Configuration clamped_leader_start(Int floor, Int ceiling, double t, double delta);

// Clamped start used by leader_event_samples for this event.
Configuration leader_event_start(const LeaderEventSpec& spec, double t, double delta);

std::vector<double> leader_event_samples(const LeaderEventSpec& spec, double t, const McOptions& opts);

// Type changes of the k-leader observed at each of the (increasing) times, one
// row per replica. ceiling <= k selects tail_ceiling(k, times.back(), delta).
std::vector<std::vector<Int>> leader_change_samples(Int k, const std::vector<double>& times, const McOptions& opts,
                                                    Int ceiling = 0);

enum class E0Process { Voter, Coalescence };

// Samples of -E_0(t).
std::vector<double> e0_samples(E0Process process, double t, const McOptions& opts);

// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0;
    for (std::size_t i = 0; i < sample.size();) {
        std::size_t j = i;
        while (j < sample.size() && sample[j] == sample[i]) ++j;
        const double f = cdf(sample[i]);
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(j) / n - f)});
        i = j;
    }
    return d;
}

}  // namespace mtasep
