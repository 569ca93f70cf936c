#include "mtasep/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>

#include "json.hpp"
#include "mtasep/errors.hpp"

namespace mtasep {

namespace {

struct StateHash {
    std::size_t operator()(const NParticleState& s) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ull;
        for (Int x : s) h = splitmix64(h ^ static_cast<std::uint64_t>(x));
        return static_cast<std::size_t>(h);
    }
};

// Result of particle i attempting its jump.
NParticleState jump(const NParticleState& s, std::size_t i) {
    NParticleState next = s;
    const Int target = s[i] + 1;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] != target) continue;
        if (j < i) {
            next[j] = s[i];
            next[i] = target;
        }
        return next;
    }
    next[i] = target;
    return next;
}

}  // namespace

CtmcDistribution ctmc_distribution(const NParticleState& start, double t, double eps,
                                   const CtmcLimits& limits) {
    const std::size_t n = start.size();
    if (n == 0) throw std::invalid_argument("empty start state");
    if (t < 0 || !(eps > 0) || eps >= 1) throw std::invalid_argument("bad t or eps");
    {
        NParticleState s = start;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw std::invalid_argument("positions must be distinct");
    }
    CtmcDistribution out;
    if (t == 0) {
        out.prob[start] = 1.0;
        return out;
    }
    const double lam = static_cast<double>(n) * t;
    std::int64_t M = 0;
    while (boost::math::gamma_p(static_cast<double>(M + 1), lam) > eps / 2) {
        if (++M > limits.max_jumps)
            throw BudgetInfeasible("uniformization needs more than " + std::to_string(limits.max_jumps) +
                                   " jumps");
    }
    out.jumps = M;
    out.loss = boost::math::gamma_p(static_cast<double>(M + 1), lam);

    std::unordered_map<NParticleState, std::size_t, StateHash> index;
    std::vector<NParticleState> states;
    std::vector<std::vector<std::size_t>> succ;  // n successors per expanded state
    auto id = [&](const NParticleState& s) {
        auto [it, fresh] = index.emplace(s, states.size());
        if (fresh) {
            states.push_back(s);
            if (states.size() > limits.max_states) throw BudgetInfeasible("state space exceeds cap");
        }
        return it->second;
    };
    id(start);
    std::vector<double> cur(1, 1.0), acc;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::int64_t m = 0;; ++m) {
        const double w = std::exp(-lam + static_cast<double>(m) * std::log(lam) -
                                  std::lgamma(static_cast<double>(m) + 1.0));
        acc.resize(cur.size(), 0.0);
        for (std::size_t k = 0; k < cur.size(); ++k) acc[k] += w * cur[k];
        if (m == M) break;
        while (succ.size() < cur.size()) {
            const std::size_t k = succ.size();
            std::vector<std::size_t> row(n);
            for (std::size_t i = 0; i < n; ++i) row[i] = id(jump(states[k], i));
            succ.push_back(std::move(row));
        }
        std::vector<double> next(states.size(), 0.0);
        for (std::size_t k = 0; k < cur.size(); ++k) {
            if (cur[k] == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i) next[succ[k][i]] += cur[k] * inv_n;
        }
        cur = std::move(next);
    }
    for (std::size_t k = 0; k < acc.size(); ++k)
        if (acc[k] > 0) out.prob[states[k]] = acc[k];
    return out;
}

CertifiedValue transition_probability(const NParticleState& start, const NParticleState& target,
                                      double t, double eps, const CtmcLimits& limits) {
    if (target.size() != start.size()) throw std::invalid_argument("state sizes differ");
    CtmcDistribution d = ctmc_distribution(start, t, eps, limits);
    auto it = d.prob.find(target);
    return {it == d.prob.end() ? 0.0 : it->second, d.loss};
}

CtmcCache::CtmcCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception&) {
        return;  // unreadable cache is rebuilt
    }
    for (auto& [k, v] : j.items()) {
        CtmcDistribution d;
        d.loss = v.at("loss").get<double>();
        d.jumps = v.at("jumps").get<std::int64_t>();
        for (auto& row : v.at("prob"))
            d.prob[row.at(0).get<NParticleState>()] = row.at(1).get<double>();
        table_.emplace(k, std::move(d));
    }
}

std::string CtmcCache::key(const NParticleState& start, double t, double eps) {
    char buf[64];
    std::ostringstream os;
    for (Int x : start) os << x << ',';
    std::snprintf(buf, sizeof buf, "|%.17g|%.17g", t, eps);
    os << buf;
    return os.str();
}

const CtmcDistribution& CtmcCache::get(const NParticleState& start, double t, double eps) {
    std::lock_guard lock(mu_);
    const std::string k = key(start, t, eps);
    auto it = table_.find(k);
    if (it != table_.end()) return it->second;
    dirty_ = true;
    return table_.emplace(k, ctmc_distribution(start, t, eps)).first->second;
}

CertifiedValue CtmcCache::probability(const NParticleState& start, const NParticleState& target,
                                      double t, double eps) {
    const CtmcDistribution& d = get(start, t, eps);
    auto it = d.prob.find(target);
    return {it == d.prob.end() ? 0.0 : it->second, d.loss};
}

void CtmcCache::save() const {
    std::lock_guard lock(mu_);
    if (!dirty_ || path_.empty()) return;
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, d] : table_) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& [s, p] : d.prob) rows.push_back({s, p});
        j[k] = {{"loss", d.loss}, {"jumps", d.jumps}, {"prob", rows}};
    }
    std::ofstream out(path_);
    out << j.dump();
}

}  // namespace mtasep
