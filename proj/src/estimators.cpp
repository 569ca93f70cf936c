#include "mtasep/estimators.hpp"

#include <stdexcept>
#include <string>

#include "mtasep/parallel.hpp"
#include "mtasep/rng.hpp"

namespace mtasep {

namespace {

constexpr std::pair<LeaderEventKind, const char*> kEventNames[] = {
    {LeaderEventKind::TypeGe, "leader_type_ge"},
    {LeaderEventKind::TypeGeAt, "leader_type_ge_at"},
    {LeaderEventKind::TwoLeadersGt, "two_leaders_gt"},
    {LeaderEventKind::TwoLeadersBetween, "two_leaders_between"},
    {LeaderEventKind::AdjacentInverted, "adjacent_inverted"},
};

Int event_floor(const LeaderEventSpec& s) { return s.kind == LeaderEventKind::AdjacentInverted ? 0 : s.k1; }

Int event_top(const LeaderEventSpec& s) {
    switch (s.kind) {
        case LeaderEventKind::TypeGe:
        case LeaderEventKind::TypeGeAt: return s.k2;
        case LeaderEventKind::TwoLeadersGt:
        case LeaderEventKind::TwoLeadersBetween: return std::max(s.k2, s.k3);
        case LeaderEventKind::AdjacentInverted: return 0;
    }
    return 0;
}

}  // namespace

const char* to_string(LeaderEventKind kind) {
    for (const auto& [k, name] : kEventNames)
        if (k == kind) return name;
    return "?";
}

std::optional<LeaderEventKind> parse_leader_event(std::string_view name) {
    for (const auto& [k, n] : kEventNames)
        if (name == n) return k;
    return std::nullopt;
}

bool leader_event(const Configuration& config, const LeaderEventSpec& s) {
    switch (s.kind) {
        case LeaderEventKind::TypeGe: return leader(config, s.k1, 1).type >= s.k2;
        case LeaderEventKind::TypeGeAt: {
            const LeaderInfo l = leader(config, s.k1, 1);
            return l.type >= s.k2 && l.position == s.x;
        }
        case LeaderEventKind::TwoLeadersGt:
            return leader(config, s.k1, 1).type >= s.k3 && leader(config, s.k1, 2).type >= s.k2;
        case LeaderEventKind::TwoLeadersBetween: {
            const Int a = leader(config, s.k1, 1).type;
            return a >= s.k2 && a < s.k3 && leader(config, s.k1, 2).type >= s.k3;
        }
        case LeaderEventKind::AdjacentInverted: {
            const LeaderInfo a = leader(config, 0, 1), b = leader(config, 0, 2);
            return b.position == a.position - 1 && b.type > a.type;
        }
    }
    throw std::logic_error("unknown leader event");
}

QuadratureResult leader_event_quadrature(const LeaderEventSpec& s, double t, const QuadratureOptions& opts) {
    switch (s.kind) {
        case LeaderEventKind::TypeGe: return prob_leader_type_ge(s.k1, s.k2, t, opts);
        case LeaderEventKind::TypeGeAt: return prob_leader_type_ge_at(s.k1, s.k2, s.x, t, opts);
        case LeaderEventKind::TwoLeadersGt: return prob_two_leaders_gt(s.k1, s.k2, s.k3, t, opts);
        case LeaderEventKind::TwoLeadersBetween: return prob_two_leaders_between(s.k1, s.k2, s.k3, t, opts);
        case LeaderEventKind::AdjacentInverted: return prob_adjacent_inverted(t, opts);
    }
    throw std::logic_error("unknown leader event");
}

Int tail_ceiling(Int floor, double t, double delta) {
    if (!(delta > 0) || delta >= 1) throw std::invalid_argument("tail_ceiling: delta must lie in (0, 1)");
    // The Poisson bound of default_ceiling always suffices, so search below it.
    Int lo = floor, hi = std::max(floor, default_ceiling(floor, t, delta));
    auto tail = [&](Int c) { return prob_leader_type_ge(floor, c + 1, t).value.real(); };
    while (lo < hi) {
        const Int mid = lo + (hi - lo) / 2;
        if (tail(mid) <= delta)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

Configuration clamped_leader_start(Int floor, Int ceiling, double t, double delta) {
    const Window w = leader_window(floor, ceiling, t, delta);
    return Configuration::step(w.lo, w.hi, TypeClamp{floor, ceiling});
}

Configuration leader_event_start(const LeaderEventSpec& spec, double t, double delta) {
    const Int floor = event_floor(spec);
    return clamped_leader_start(floor, std::max(event_top(spec), default_ceiling(floor, t, delta)), t, delta);
}

std::vector<double> leader_event_samples(const LeaderEventSpec& spec, double t, const McOptions& opts) {
    const Configuration init = leader_event_start(spec, t, opts.delta);
    return run_replicas<double>(opts.reps, opts.threads, [&](std::size_t r) {
        const Configuration c = simulate_tasep(init, t, ClockStream(opts.seed, r), static_cast<EventLog*>(nullptr));
        return leader_event(c, spec) ? 1.0 : 0.0;
    });
}

std::vector<std::vector<Int>> leader_change_samples(Int k, const std::vector<double>& times, const McOptions& opts,
                                                    Int ceiling) {
    if (times.empty() || !std::is_sorted(times.begin(), times.end()) || times.front() < 0)
        throw std::invalid_argument("leader_change_samples: times must be nonnegative and increasing");
    const double horizon = times.back();
    if (ceiling <= k) ceiling = tail_ceiling(k, horizon, opts.delta);
    const Configuration init = clamped_leader_start(k, ceiling, horizon, opts.delta);
    return run_replicas<std::vector<Int>>(opts.reps, opts.threads, [&](std::size_t r) {
        LeaderChangeCounter counter(init, k);
        std::vector<Int> out;
        out.reserve(times.size());
        Observer obs = [&](const SwapEvent& e) {
            while (out.size() < times.size() && times[out.size()] < e.t) out.push_back(counter.changes());
            counter(e);
        };
        simulate_tasep(init, horizon, ClockStream(opts.seed, r), std::span<const Observer>(&obs, 1));
        while (out.size() < times.size()) out.push_back(counter.changes());
        return out;
    });
}

std::vector<double> e0_samples(E0Process process, double t, const McOptions& opts) {
    // The opinion block of 0 only grows leftwards from influence on its right,
    // so the left margin is a tail bound over all replicas and the right margin
    // the usual influence radius.
    const double per_run = opts.delta / static_cast<double>(std::max<std::uint64_t>(opts.reps, 1));
    const Window w{-tail_ceiling(0, t, per_run) - 2, window_radius(t, opts.delta)};
    return run_replicas<double>(opts.reps, opts.threads, [&](std::size_t r) {
        const ClockStream clocks(opts.seed, r);
        if (process == E0Process::Voter)
            return -static_cast<double>(e0_voter(simulate_voter(w, t, clocks), w.lo));
        return -static_cast<double>(e0_coalescence(simulate_coalescence(w, t, clocks), w.lo));
    });
}

}  // namespace mtasep
