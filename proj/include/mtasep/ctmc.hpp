#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "mtasep/samplers.hpp"

namespace mtasep {

// Law of the n-particle coloured TASEP at time t by uniformization at rate n.
// Every state reachable within M jumps is enumerated, so the only loss is the
// Poisson tail P(Poisson(nt) > M) <= eps/2, reported in `loss`.
struct CtmcDistribution {
    std::map<NParticleState, double> prob;
    double loss = 0.0;
    std::int64_t jumps = 0;  // M
};

struct CtmcLimits {
    std::int64_t max_jumps = 4000;
    std::size_t max_states = 5'000'000;
};

CtmcDistribution ctmc_distribution(const NParticleState& start, double t, double eps,
                                   const CtmcLimits& limits = {});

struct CertifiedValue {
    double value;
    double bound;
};

CertifiedValue transition_probability(const NParticleState& start, const NParticleState& target,
                                      double t, double eps, const CtmcLimits& limits = {});

// On-disk JSON cache of full distributions keyed by (start, t, eps).
class CtmcCache {
public:
    explicit CtmcCache(std::string path);

    const CtmcDistribution& get(const NParticleState& start, double t, double eps);
    CertifiedValue probability(const NParticleState& start, const NParticleState& target, double t,
                               double eps);
    void save() const;

private:
    static std::string key(const NParticleState& start, double t, double eps);

    std::string path_;
    std::map<std::string, CtmcDistribution> table_;
    bool dirty_ = false;
    mutable std::mutex mu_;
};

}  // namespace mtasep
