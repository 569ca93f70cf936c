#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mtasep/contour.hpp"
#include "mtasep/lattice.hpp"
#include "mtasep/samplers.hpp"

namespace mtasep {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "1.0.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string formula = "leader_type_ge";  // integral
    std::string observable = "leader_type_ge";  // simulate
    std::string law = "leader_type";  // density
    std::string suite = "dualities";  // verify
    double t = 1.0;
    std::vector<double> t_grid{1, 4, 16, 64};
    Int k1 = 0;
    Int k2 = 1;
    Int k3 = 2;
    Int site = 0;
    std::vector<Int> nu;
    std::vector<Int> mu;
    std::vector<double> a{0.5, 1, 2};
    double x = 0.0;
    std::string grid = "0:4:0.1";
    std::uint64_t reps = 10000;
    std::uint64_t seed = 1;
    double delta = kDefaultDelta;
    double tol = 1e-9;
    std::string out;
    std::string event_log;
    std::vector<std::string> inputs;
    unsigned threads = 1;

    bool operator==(const RunConfig&) const = default;
};

// Output paths and the thread count are omitted from result files so that they
// are identical across parallelism and destinations; the sidecar keeps them.
nlohmann::json to_json(const RunConfig& c, bool with_runtime = true);
// Missing keys keep their defaults; unknown keys and a wrong schema version throw.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

struct Grid {
    double lo;
    double hi;
    double step;
    std::vector<double> points() const;
};

// "lo:hi:step", inclusive of hi up to rounding.
Grid parse_grid(std::string_view spec);

// 17 significant digits, '.' decimal point regardless of locale.
std::string format_double(double v);

void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
               const std::string& comment = "");

nlohmann::json to_json(const QuadratureResult& r);
nlohmann::json to_json(const MCEstimate& e);

// {artifact_version, config, result}. No timing, so identical inputs give identical files.
nlohmann::json result_record(const RunConfig& c, nlohmann::json payload);

// <out>.meta.json with wall time, timestamp and thread count.
void write_meta(const std::string& out, const RunConfig& c, double wall_seconds);

}  // namespace mtasep
