#include "mtasep/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mtasep/errors.hpp"

namespace mtasep {

namespace {

constexpr Int kMaxAbsType = Int{1} << 62;

void check_cutoff(const Configuration& config, Int c) {
    if (c <= -kMaxAbsType || c >= kMaxAbsType)
        throw std::invalid_argument("cutoff out of range");
    const TypeClamp& cl = config.clamp();
    if (cl.floor != kHole && c < cl.floor)
        throw std::invalid_argument("cutoff below clamp floor");
    if (cl.ceiling != kTop && c > cl.ceiling + 1)
        throw std::invalid_argument("cutoff above clamp ceiling");
}

// Visits positions x with eta(x) >= c in decreasing order until f returns false.
template <class F>
void scan_ge(const Configuration& config, Int c, F&& f) {
    check_cutoff(config, c);
    const bool rainbow = config.boundary() == Boundary::RainbowStep;
    if (rainbow) {
        for (Int x = -c; x > config.hi(); --x)
            if (!f(x)) return;
    }
    const auto& cells = config.cells();
    for (Int x = config.hi(); x >= config.lo(); --x) {
        if (cells[static_cast<std::size_t>(x - config.lo())] >= c && !f(x)) return;
    }
    if (rainbow) {
        for (Int x = std::min(config.lo() - 1, -c);; --x)
            if (!f(x)) return;
    }
}

}  // namespace

Configuration::Configuration(Int lo, Int hi, std::vector<Int> cells, Boundary boundary,
                             TypeClamp clamp)
    : lo_(lo), hi_(hi), cells_(std::move(cells)), boundary_(boundary), clamp_(clamp) {
    if (lo_ > hi_) throw std::invalid_argument("window_lo > window_hi");
    if (static_cast<Int>(cells_.size()) != hi_ - lo_ + 1)
        throw std::invalid_argument("cell count does not match window");
    if (boundary_ == Boundary::RainbowStep) {
        std::vector<Int> expect;
        expect.reserve(cells_.size());
        for (Int x = lo_; x <= hi_; ++x) expect.push_back(clamp_(-x));
        std::vector<Int> have = cells_;
        std::sort(expect.begin(), expect.end());
        std::sort(have.begin(), have.end());
        if (have != expect)
            throw std::invalid_argument("cells are not a permutation of the window's step types");
    }
}

Configuration Configuration::step(Int lo, Int hi, TypeClamp clamp) {
    std::vector<Int> cells;
    cells.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (Int x = lo; x <= hi; ++x) cells.push_back(clamp(-x));
    return Configuration(lo, hi, std::move(cells), Boundary::RainbowStep, clamp);
}

Int Configuration::at(Int x) const {
    if (in_window(x)) return cells_[static_cast<std::size_t>(x - lo_)];
    if (boundary_ == Boundary::RainbowStep) return clamp_(-x);
    return kHole;
}

bool Configuration::is_rainbow() const {
    return boundary_ == Boundary::RainbowStep && clamp_.identity();
}

Configuration Configuration::inverse() const {
    if (!is_rainbow()) throw NotInvertible("configuration is not a rainbow permutation");
    std::vector<Int> inv(cells_.size());
    for (Int x = lo_; x <= hi_; ++x) {
        Int type = cells_[static_cast<std::size_t>(x - lo_)];
        inv[static_cast<std::size_t>(type + hi_)] = x;
    }
    return Configuration(-hi_, -lo_, std::move(inv), Boundary::RainbowStep);
}

ColorCutoffs::ColorCutoffs(std::vector<Int> cutoffs) : c(std::move(cutoffs)) {
    if (c.empty()) throw std::invalid_argument("empty cutoff tuple");
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i - 1] >= c[i]) throw std::invalid_argument("cutoffs must be strictly increasing");
}

ColoredComposition::ColoredComposition(std::vector<Int> p, std::vector<Int> b)
    : parts(std::move(p)), colors(std::move(b)) {
    if (parts.empty() || parts.size() != colors.size())
        throw std::invalid_argument("composition parts/colors mismatch");
    std::vector<Int> s = parts;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw std::invalid_argument("composition parts must be distinct");
}

LeaderRecord compute_M_C(const Configuration& config, const ColorCutoffs& C) {
    const std::size_t n = C.size();
    LeaderRecord k(n);
    for (std::size_t i = n; i-- > 0;) {
        bool found = false;
        scan_ge(config, C.c[i], [&](Int x) {
            for (std::size_t j = i + 1; j < n; ++j)
                if (k[j] == x) return true;
            k[i] = x;
            found = true;
            return false;
        });
        if (!found) throw EmptyLevel("A_c exhausted at cutoff " + std::to_string(C.c[i]));
    }
    return k;
}

LeaderInfo leader(const Configuration& config, Int k, Int s) {
    if (s < 1) throw std::invalid_argument("leader rank must be >= 1");
    Int seen = 0;
    Int pos = 0;
    bool found = false;
    scan_ge(config, k, [&](Int x) {
        if (++seen == s) {
            pos = x;
            found = true;
            return false;
        }
        return true;
    });
    if (!found) throw EmptyLevel("fewer than s particles of type >= k");
    return {pos, config.at(pos)};
}

HeightTriple height(const Configuration& config, Int c, Int k) {
    HeightTriple h;
    for (Int l = std::max(k, config.lo()); l <= config.hi(); ++l) {
        Int v = config.at(l);
        if (v == c) ++h.h_eq;
        if (v > c) ++h.h_gt;
    }
    if (config.boundary() == Boundary::RainbowStep) {
        // Right of the window eta(l) = -l: l < -c exceeds c, l = -c equals it.
        Int from = std::max(k, config.hi() + 1);
        h.h_gt += std::max<Int>(0, -c - from);
        if (-c >= from) ++h.h_eq;
        // Left of the window, only the stretch [k, lo-1] counts.
        if (k < config.lo()) {
            Int top = std::min(config.lo() - 1, -c - 1);
            h.h_gt += std::max<Int>(0, top - k + 1);
            if (-c >= k && -c <= config.lo() - 1) ++h.h_eq;
        }
    }
    h.h_geq = h.h_eq + h.h_gt;
    return h;
}

ObservableTarget observable_target(const ColoredComposition& kappa) {
    const std::size_t n = kappa.size();
    std::vector<std::size_t> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = j;
    std::sort(sigma.begin(), sigma.end(),
              [&](std::size_t a, std::size_t b) { return kappa.parts[a] < kappa.parts[b]; });
    std::vector<Int> c(n);
    LeaderRecord colors(n);
    for (std::size_t j = 0; j < n; ++j) {
        c[j] = kappa.parts[sigma[j]] + 1;
        colors[j] = kappa.colors[sigma[j]];
    }
    return {ColorCutoffs(std::move(c)), std::move(colors)};
}

int observable_O(const Configuration& config, const ColoredComposition& kappa) {
    const Configuration xi = config.inverse();
    const std::size_t n = kappa.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Int ki = kappa.parts[i];
        const Int bi = kappa.colors[i];
        if (height(config, bi, ki + 1).h_eq != 1) return 0;
        Int composition_gt = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (kappa.parts[j] >= ki + 1 && kappa.colors[j] > bi) ++composition_gt;
        if (height(xi, ki, bi + 1).h_gt != composition_gt) return 0;
    }
    return 1;
}

namespace {

void require_rainbow(const Configuration& config) {
    if (!config.is_rainbow())
        throw std::invalid_argument("projection requires a rainbow configuration");
}

}  // namespace

std::vector<Int> project_voter(const Configuration& config) {
    require_rainbow(config);
    std::vector<Int> out(config.cells().size());
    Int m = 1 - config.lo();
    for (std::size_t i = 0; i < out.size(); ++i) {
        m = std::min(m, config.cells()[i]);
        out[i] = m;
    }
    return out;
}

std::vector<Int> project_coalescence(const Configuration& config) {
    require_rainbow(config);
    std::vector<Int> out(config.cells().size());
    Int m = 1 - config.lo();
    for (std::size_t i = 0; i < out.size(); ++i) {
        Int v = config.cells()[i];
        out[i] = v < m ? 1 : 0;
        m = std::min(m, v);
    }
    return out;
}

std::vector<Int> project_ranking(const Configuration& config) {
    require_rainbow(config);
    const auto& cells = config.cells();
    const std::size_t n = cells.size();
    // Fenwick tree over type offsets; types outside the window are all larger.
    std::vector<Int> tree(n + 1, 0);
    std::vector<Int> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t idx = static_cast<std::size_t>(cells[i] + config.hi()) + 1;
        for (std::size_t j = idx; j <= n; j += j & (~j + 1)) ++tree[j];
        Int count = 0;
        for (std::size_t j = idx; j > 0; j -= j & (~j + 1)) count += tree[j];
        out[i] = count;
    }
    return out;
}

}  // namespace mtasep
