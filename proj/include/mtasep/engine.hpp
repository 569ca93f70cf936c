#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mtasep/lattice.hpp"
#include "mtasep/rng.hpp"

namespace mtasep {

// Bond rules act on cells[i], cells[i+1] for bond i.
struct TasepRule {
    static bool admissible(const Int* c, std::size_t i) { return c[i] > c[i + 1]; }
    static void apply(Int* c, std::size_t i) {
        Int a = c[i];
        c[i] = c[i + 1];
        c[i + 1] = a;
    }
};

struct VoterRule {
    static bool admissible(const Int* c, std::size_t i) { return c[i] != c[i + 1]; }
    static void apply(Int* c, std::size_t i) { c[i] = c[i + 1]; }
};

struct CoalescenceRule {
    static bool admissible(const Int* c, std::size_t i) { return c[i + 1] != 0; }
    static void apply(Int* c, std::size_t i) {
        c[i] = 1;
        c[i + 1] = 0;
    }
};

struct RankingRule {
    static bool admissible(const Int* c, std::size_t i) { return c[i] >= c[i + 1]; }
    static void apply(Int* c, std::size_t i) {
        Int a = c[i];
        c[i] = c[i + 1];
        c[i + 1] = a + 1;
    }
};

// Discrete-event simulation with one exponential clock per bond. Only
// admissible bonds hold a pending ring, kept in an indexed binary heap ordered
// by (time, bond). When a bond becomes admissible its next ring is drawn fresh
// from its own stream, which is exact by memorylessness.
template <class Rule>
class BondEngine {
public:
    BondEngine(std::vector<Int>& cells, Int lo, const ClockStream& clocks)
        : cells_(cells), lo_(lo), clocks_(clocks) {
        nb_ = cells.size() < 2 ? 0 : cells.size() - 1;
        time_.assign(nb_, 0.0);
        slot_.assign(nb_, kAbsent);
        draws_.assign(nb_, 0);
        heap_.reserve(nb_);
    }

    // Runs until time t. obs(time, bond index, pre-event left, pre-event right).
    template <class Obs>
    void run(double t, Obs&& obs) {
        Int* c = cells_.data();
        for (std::size_t i = 0; i < nb_; ++i)
            if (Rule::admissible(c, i)) schedule(i, 0.0);
        while (!heap_.empty()) {
            const std::size_t i = heap_[0];
            const double now = time_[i];
            if (now > t) break;
            pop_top();
            obs(now, i, c[i], c[i + 1]);
            Rule::apply(c, i);
            const std::size_t first = i > 0 ? i - 1 : 0;
            const std::size_t last = i + 1 < nb_ ? i + 1 : i;
            for (std::size_t j = first; j <= last; ++j) {
                const bool adm = Rule::admissible(c, j);
                const bool pending = slot_[j] != kAbsent;
                if (adm && !pending)
                    schedule(j, now);
                else if (!adm && pending)
                    remove(j);
            }
        }
    }

private:
    static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

    bool less(std::size_t a, std::size_t b) const {
        return time_[a] < time_[b] || (time_[a] == time_[b] && a < b);
    }

    void schedule(std::size_t i, double now) {
        time_[i] = now + clocks_.exponential(lo_ + static_cast<Int>(i), draws_[i]++);
        slot_[i] = heap_.size();
        heap_.push_back(i);
        sift_up(slot_[i]);
    }

    void pop_top() { remove(heap_[0]); }

    void remove(std::size_t i) {
        const std::size_t s = slot_[i];
        const std::size_t back = heap_.back();
        heap_.pop_back();
        slot_[i] = kAbsent;
        if (back == i) return;
        heap_[s] = back;
        slot_[back] = s;
        sift_down(s);
        sift_up(slot_[back]);
    }

    void sift_up(std::size_t s) {
        const std::size_t b = heap_[s];
        while (s > 0) {
            const std::size_t p = (s - 1) / 2;
            if (!less(b, heap_[p])) break;
            heap_[s] = heap_[p];
            slot_[heap_[s]] = s;
            s = p;
        }
        heap_[s] = b;
        slot_[b] = s;
    }

    void sift_down(std::size_t s) {
        const std::size_t b = heap_[s];
        const std::size_t n = heap_.size();
        for (;;) {
            std::size_t child = 2 * s + 1;
            if (child >= n) break;
            if (child + 1 < n && less(heap_[child + 1], heap_[child])) ++child;
            if (!less(heap_[child], b)) break;
            heap_[s] = heap_[child];
            slot_[heap_[s]] = s;
            s = child;
        }
        heap_[s] = b;
        slot_[b] = s;
    }

    std::vector<Int>& cells_;
    Int lo_;
    const ClockStream& clocks_;
    std::size_t nb_ = 0;
    std::vector<double> time_;
    std::vector<std::size_t> slot_;
    std::vector<std::uint64_t> draws_;
    std::vector<std::size_t> heap_;
};

}  // namespace mtasep
