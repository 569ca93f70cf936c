#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mtasep/lattice.hpp"
#include "mtasep/samplers.hpp"

namespace mtasep {

enum class ProjectionKind { Voter, Coalescence, Ranking };

const char* to_string(ProjectionKind kind);

struct PathCheck {
    bool pass = true;
    std::size_t events = 0;
    std::optional<std::size_t> violation;  // index of the first offending event
    std::string detail;
};

// One accepted swap at `bond` must move the projected state from `before` to
// `after` by the local rule of the target process and touch nothing else.
bool projected_step_ok(ProjectionKind kind, const std::vector<Int>& before, const std::vector<Int>& after,
                       Int bond, Int lo);

// states[i] is the projected state before event i; states.back() after the last one.
PathCheck check_projected_path(ProjectionKind kind, const std::vector<std::vector<Int>>& states,
                               const EventLog& log, Int lo);

// Replays the log from init and checks the projection after every event.
PathCheck check_projection_path(const Configuration& init, const EventLog& log, ProjectionKind kind);

// observable_O(eta, kappa) == 1{M_C(eta^{-1}) matches the colour tuple of kappa}.
// The identity needs pairwise distinct colours: M_C never repeats an entry,
// while the product side can be 1 for repeated colours. Those throw.
bool check_observable_identity(const Configuration& config, const ColoredComposition& kappa);

struct EqualityTestReport {
    std::string name;
    std::string statistic_kind;  // "chi-square" or "two-proportion"
    double statistic = 0.0;
    std::size_t df = 0;
    double p_value = 1.0;
    double effect = 0.0;  // total variation distance, or |p1 - p2|
    double estimate1 = 0.0;
    double estimate2 = 0.0;
    double combined_stderr = 0.0;
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;
    double threshold = 0.0;  // significance level the p-value is compared to
    std::uint64_t seed = 0;
    int attempts = 1;
    bool pass = true;
};

nlohmann::json to_json(const EqualityTestReport& r);

// Two-sample chi-square homogeneity test over outcome vectors. Bins are pooled
// (rarest first) until every expected count is at least 5.
EqualityTestReport chi_square_two_sample(std::string name, const std::vector<std::vector<Int>>& a,
                                         const std::vector<std::vector<Int>>& b, double alpha);

EqualityTestReport two_proportion(std::string name, std::uint64_t hits1, std::uint64_t n1, std::uint64_t hits2,
                                  std::uint64_t n2, double alpha);

struct DualityOptions {
    std::uint64_t seed = 1;
    std::uint64_t reps = 100000;
    double alpha = 1e-3;
    unsigned threads = 1;
    double delta = kDefaultDelta;
};

// M_C(t) under TASEP versus the n-particle process from (-c_1, ..., -c_n).
EqualityTestReport test_dual_distribution(const ColorCutoffs& C, double t, const DualityOptions& opts);

// Law of (-eta_t(x))_{x in sites} versus (eta_t^{-1}(-x))_{x in sites}.
EqualityTestReport test_color_position_symmetry(double t, const std::vector<Int>& sites,
                                                const DualityOptions& opts);

// Voter event: nu(r2) = nu(r1) = y and nu(r2 - 1) != y.
bool voter_event(const std::vector<Int>& opinions, Int lo, Int y, Int r2, Int r1);
// TASEP event: the particle of type -r2 is the (-r1)-leader and sits at -y.
bool voter_dual_leader_event(const Configuration& config, Int y, Int r2, Int r1);

// Returns {projected voter vs leader event, native voter vs leader event}.
std::vector<EqualityTestReport> test_voter_leader_duality(Int y, Int r2, Int r1, double t,
                                                          const DualityOptions& opts);

// Ranking event: rank(-k-s) = 1, rank(-s) = 2, no other rank-1 site in
// (-k-s, 0] and no rank-2 site in (-s, 0]. This is the argmin / second argmin
// event over sites <= 0.
bool ranking_event(const std::vector<Int>& ranks, Int lo, Int k, Int s);
// Type k+s is the 0-leader and type s is the (0,2)-leader.
bool ranking_dual_leader_event(const Configuration& config, Int k, Int s);

// Returns {projected ranking vs leader event, native ranking vs leader event}.
std::vector<EqualityTestReport> test_ranking_leader_duality(Int k, Int s, double t, const DualityOptions& opts);

struct DeterministicCheck {
    std::string name;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    std::string first_witness;
    bool pass = true;
};

nlohmann::json to_json(const DeterministicCheck& c);

DeterministicCheck check_projection_suite(ProjectionKind kind, std::uint64_t paths, double t, Window w,
                                          std::uint64_t seed, unsigned threads = 1);
DeterministicCheck check_observable_identity_suite(std::uint64_t samples, std::uint64_t seed,
                                                   unsigned threads = 1);

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::uint64_t reps = 0;
    double alpha = 0.0;
    double per_test_alpha = 0.0;
    std::vector<EqualityTestReport> tests;
    std::vector<DeterministicCheck> checks;
    bool pass = true;
};

nlohmann::json to_json(const SuiteReport& s);

// All duality claims at time t. Statistical tests share a Bonferroni-corrected
// level; a failing test is rerun once with 4x replicas and a fresh seed.
SuiteReport run_duality_suite(double t, const DualityOptions& opts);

// Quadrature of each leader formula against Monte Carlo frequencies at several
// parameter points; a point passes when the two differ by at most 3 combined
// standard errors. Same rerun policy as the duality suite.
SuiteReport run_formula_suite(double t, const DualityOptions& opts);

}  // namespace mtasep
