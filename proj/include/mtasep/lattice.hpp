#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace mtasep {

using Int = std::int64_t;

// Sentinels. A hole is below every type, the merged top class above every type.
inline constexpr Int kHole = std::numeric_limits<Int>::min();
inline constexpr Int kTop = std::numeric_limits<Int>::max();

enum class Boundary { RainbowStep, Frozen };

// Projection of types onto [floor, ceiling]: lower types become holes,
// higher types merge into one top class. The identity clamp keeps all types.
struct TypeClamp {
    Int floor = kHole;
    Int ceiling = kTop;

    Int operator()(Int v) const {
        if (v < floor) return kHole;
        if (v > ceiling) return kTop;
        return v;
    }
    bool identity() const { return floor == kHole && ceiling == kTop; }
    bool operator==(const TypeClamp&) const = default;
};

// Window snapshot of a type assignment on Z. Outside [lo, hi] the
// RainbowStep boundary continues as clamp(-x); the Frozen boundary is empty.
class Configuration {
public:
    Configuration(Int lo, Int hi, std::vector<Int> cells,
                  Boundary boundary = Boundary::RainbowStep, TypeClamp clamp = {});

    static Configuration step(Int lo, Int hi, TypeClamp clamp = {});

    Int lo() const { return lo_; }
    Int hi() const { return hi_; }
    Int size() const { return hi_ - lo_ + 1; }
    Boundary boundary() const { return boundary_; }
    const TypeClamp& clamp() const { return clamp_; }
    const std::vector<Int>& cells() const { return cells_; }

    bool in_window(Int x) const { return x >= lo_ && x <= hi_; }
    Int at(Int x) const;

    // All types distinct, no holes, no merged class, RainbowStep boundary.
    bool is_rainbow() const;

    // The inverse permutation xi = eta^{-1} as a configuration on [-hi, -lo].
    Configuration inverse() const;

    bool operator==(const Configuration&) const = default;

private:
    Int lo_;
    Int hi_;
    std::vector<Int> cells_;
    Boundary boundary_;
    TypeClamp clamp_;
};

struct ColorCutoffs {
    std::vector<Int> c;

    ColorCutoffs() = default;
    explicit ColorCutoffs(std::vector<Int> cutoffs);
    std::size_t size() const { return c.size(); }
};

// (k_1, ..., k_n); also used for dual particle positions (mu, nu).
using LeaderRecord = std::vector<Int>;

struct ColoredComposition {
    std::vector<Int> parts;
    std::vector<Int> colors;

    ColoredComposition(std::vector<Int> parts, std::vector<Int> colors);
    std::size_t size() const { return parts.size(); }
};

struct HeightTriple {
    Int h_eq = 0;
    Int h_gt = 0;
    Int h_geq = 0;
    bool operator==(const HeightTriple&) const = default;
};

struct LeaderInfo {
    Int position;
    Int type;
    bool operator==(const LeaderInfo&) const = default;
};

LeaderRecord compute_M_C(const Configuration& config, const ColorCutoffs& C);

// Particle whose position is the s-th largest among positions of types >= k.
LeaderInfo leader(const Configuration& config, Int k, Int s = 1);

HeightTriple height(const Configuration& config, Int c, Int k);

int observable_O(const Configuration& config, const ColoredComposition& kappa);

// Cutoffs C = sorted {kappa_j + 1} and the colour tuple (b_sigma(1), ..., b_sigma(n)).
struct ObservableTarget {
    ColorCutoffs cutoffs;
    LeaderRecord colors;
};
ObservableTarget observable_target(const ColoredComposition& kappa);

// Projections on the window [lo, hi]. Outside the window the step values hold:
// voter(x) = -x, coalescence(x) = 1, ranking(x) = 1.
std::vector<Int> project_voter(const Configuration& config);
std::vector<Int> project_coalescence(const Configuration& config);
std::vector<Int> project_ranking(const Configuration& config);

}  // namespace mtasep
