#include "mtasep/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "json.hpp"
#include "mtasep/engine.hpp"
#include "mtasep/errors.hpp"

namespace mtasep {

Int window_radius(double t, double delta) {
    if (t < 0 || !(delta > 0) || delta >= 1) throw std::invalid_argument("window_radius: bad t or delta");
    if (t == 0) return 1;
    // P(Poisson(t) >= w) = P(w, t), the regularized lower incomplete gamma.
    Int w = std::max<Int>(1, static_cast<Int>(std::floor(t)));
    while (boost::math::gamma_p(static_cast<double>(w), t) > delta) ++w;
    return w;
}

Int default_ceiling(Int floor, double t, double delta) {
    return floor - 1 + window_radius(t, delta);
}

Window leader_window(Int floor, Int ceiling, double t, double delta) {
    if (ceiling < floor) throw std::invalid_argument("leader_window: ceiling < floor");
    const Int w = window_radius(t, delta);
    return {-ceiling - 1 - w, -floor + w};
}

namespace {

void check_window(Int lo, Int hi, double t, const SimOptions& opts) {
    if (t < 0) throw std::invalid_argument("negative time");
    if (!opts.observed) return;
    const Int w = window_radius(t, opts.delta);
    if (lo > opts.observed->lo - w || hi < opts.observed->hi + w)
        throw WindowTooSmall("window [" + std::to_string(lo) + "," + std::to_string(hi) +
                             "] needs margin " + std::to_string(w) + " around observed sites");
}

}  // namespace

void EventLog::write_jsonl(std::ostream& os) const {
    for (const auto& e : events) {
        nlohmann::json j = {{"t", e.t}, {"bond", e.bond}, {"types", {e.left, e.right}}};
        os << j.dump() << '\n';
    }
}

EventLog EventLog::read_jsonl(std::istream& is, double horizon) {
    EventLog log;
    log.horizon = horizon;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        log.events.push_back({j.at("t").get<double>(), j.at("bond").get<Int>(),
                              j.at("types").at(0).get<Int>(), j.at("types").at(1).get<Int>()});
    }
    return log;
}

Configuration simulate_tasep(const Configuration& init, double t, const ClockStream& clocks,
                             std::span<const Observer> observers, const SimOptions& opts) {
    check_window(init.lo(), init.hi(), t, opts);
    std::vector<Int> cells = init.cells();
    const Int lo = init.lo();
    BondEngine<TasepRule> engine(cells, lo, clocks);
    if (observers.empty()) {
        engine.run(t, [](double, std::size_t, Int, Int) {});
    } else {
        engine.run(t, [&](double now, std::size_t i, Int a, Int b) {
            const SwapEvent e{now, lo + static_cast<Int>(i), a, b};
            for (const auto& o : observers) o(e);
        });
    }
    return Configuration(init.lo(), init.hi(), std::move(cells), init.boundary(), init.clamp());
}

Configuration simulate_tasep(const Configuration& init, double t, const ClockStream& clocks,
                             EventLog* log, const SimOptions& opts) {
    if (!log) return simulate_tasep(init, t, clocks, std::span<const Observer>{}, opts);
    log->horizon = t;
    log->events.clear();
    Observer rec = [log](const SwapEvent& e) { log->events.push_back(e); };
    return simulate_tasep(init, t, clocks, std::span<const Observer>(&rec, 1), opts);
}

NParticleState simulate_nparticle(const NParticleState& start, double t, const ClockStream& clocks) {
    const std::size_t n = start.size();
    {
        NParticleState s = start;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw std::invalid_argument("n-particle positions must be distinct");
    }
    NParticleState pos = start;
    std::vector<double> ring(n);
    std::vector<std::uint64_t> draws(n, 0);
    for (std::size_t i = 0; i < n; ++i) ring[i] = clocks.exponential(static_cast<Int>(i), draws[i]++);
    for (;;) {
        std::size_t i = 0;
        for (std::size_t j = 1; j < n; ++j)
            if (ring[j] < ring[i]) i = j;
        if (n == 0 || ring[i] > t) break;
        const Int target = pos[i] + 1;
        std::size_t occupant = n;
        for (std::size_t j = 0; j < n; ++j)
            if (pos[j] == target) occupant = j;
        if (occupant == n) {
            pos[i] = target;
        } else if (occupant < i) {  // colour index order is priority order
            pos[occupant] = pos[i];
            pos[i] = target;
        }
        ring[i] += clocks.exponential(static_cast<Int>(i), draws[i]++);
    }
    return pos;
}

std::vector<Int> simulate_voter(Window w, double t, const ClockStream& clocks, const SimOptions& opts) {
    check_window(w.lo, w.hi, t, opts);
    std::vector<Int> cells;
    for (Int x = w.lo; x <= w.hi; ++x) cells.push_back(-x);
    BondEngine<VoterRule> engine(cells, w.lo, clocks);
    engine.run(t, [](double, std::size_t, Int, Int) {});
    return cells;
}

std::vector<Int> simulate_coalescence(Window w, double t, const ClockStream& clocks,
                                      const SimOptions& opts) {
    check_window(w.lo, w.hi, t, opts);
    std::vector<Int> cells(static_cast<std::size_t>(w.hi - w.lo + 1), 1);
    BondEngine<CoalescenceRule> engine(cells, w.lo, clocks);
    engine.run(t, [](double, std::size_t, Int, Int) {});
    return cells;
}

std::vector<Int> simulate_ranking(Window w, double t, const ClockStream& clocks) {
    std::vector<Int> cells(static_cast<std::size_t>(w.hi - w.lo + 1), 1);
    BondEngine<RankingRule> engine(cells, w.lo, clocks);
    engine.run(t, [](double, std::size_t, Int, Int) {});
    return cells;
}

LeaderChangeCounter::LeaderChangeCounter(const Configuration& init, Int k) {
    LeaderInfo l = leader(init, k, 1);
    pos_ = l.position;
    type_ = l.type;
}

Int count_leader_changes(const Configuration& init, const EventLog& log, Int k) {
    LeaderChangeCounter counter(init, k);
    for (const auto& e : log.events) counter(e);
    return counter.changes();
}

Int e0_voter(const std::vector<Int>& opinions, Int lo) {
    const Int size = static_cast<Int>(opinions.size());
    if (lo > 0 || -lo >= size) throw std::invalid_argument("e0_voter: window does not contain 0");
    const auto at = [&](Int x) { return opinions[static_cast<std::size_t>(x - lo)]; };
    Int i = 0;
    while (i - 1 >= lo && at(i - 1) == at(0)) --i;
    if (i == lo) throw WindowTooSmall("e0_voter: opinion block reaches the window edge");
    return i;
}

Int e0_coalescence(const std::vector<Int>& occupied, Int lo) {
    const Int size = static_cast<Int>(occupied.size());
    if (lo > 0 || -lo >= size) throw std::invalid_argument("e0_coalescence: window does not contain 0");
    for (Int x = 0; x >= lo; --x)
        if (occupied[static_cast<std::size_t>(x - lo)] != 0) return x;
    throw WindowTooSmall("e0_coalescence: no occupied nonpositive site in window");
}

namespace {

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}  // namespace

MCEstimate summarize(std::span<const double> values, std::uint64_t seed, double elapsed) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("summarize needs at least 2 replicas");
    const double mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
    const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
    MCEstimate est;
    est.mean = mean;
    est.stderr_ = std::sqrt(var / static_cast<double>(n));
    est.reps = n;
    est.seed = seed;
    est.elapsed = elapsed;
    return est;
}

}  // namespace mtasep
