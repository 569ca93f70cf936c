#include "mtasep/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <set>

namespace mtasep {

nlohmann::json to_json(const RunConfig& c, bool with_runtime) {
    nlohmann::json j = {
        {"schema_version", kSchemaVersion},
        {"command", c.command},
        {"formula", c.formula},
        {"observable", c.observable},
        {"law", c.law},
        {"suite", c.suite},
        {"t", c.t},
        {"t_grid", c.t_grid},
        {"k1", c.k1},
        {"k2", c.k2},
        {"k3", c.k3},
        {"site", c.site},
        {"nu", c.nu},
        {"mu", c.mu},
        {"a", c.a},
        {"x", c.x},
        {"grid", c.grid},
        {"reps", c.reps},
        {"seed", c.seed},
        {"delta", c.delta},
        {"tol", c.tol},
        {"inputs", c.inputs},
    };
    if (with_runtime) {
        j["out"] = c.out;
        j["event_log"] = c.event_log;
        j["threads"] = c.threads;
    }
    return j;
}

namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& field) {
    if (!j.contains(key)) return;
    try {
        field = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("schema_version") || j.at("schema_version") != kSchemaVersion)
        throw ConfigError("config schema_version must be " + std::to_string(kSchemaVersion));
    static const std::set<std::string> known = {
        "schema_version", "command", "formula", "observable", "law", "suite", "t",   "t_grid",    "k1",
        "k2",             "k3",      "site",    "nu",         "mu",  "a",     "x",   "grid",      "reps",
        "seed",           "delta",   "tol",     "out",        "event_log",    "inputs", "threads"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");
    RunConfig c;
    read(j, "command", c.command);
    read(j, "formula", c.formula);
    read(j, "observable", c.observable);
    read(j, "law", c.law);
    read(j, "suite", c.suite);
    read(j, "t", c.t);
    read(j, "t_grid", c.t_grid);
    read(j, "k1", c.k1);
    read(j, "k2", c.k2);
    read(j, "k3", c.k3);
    read(j, "site", c.site);
    read(j, "nu", c.nu);
    read(j, "mu", c.mu);
    read(j, "a", c.a);
    read(j, "x", c.x);
    read(j, "grid", c.grid);
    read(j, "reps", c.reps);
    read(j, "seed", c.seed);
    read(j, "delta", c.delta);
    read(j, "tol", c.tol);
    read(j, "out", c.out);
    read(j, "event_log", c.event_log);
    read(j, "inputs", c.inputs);
    read(j, "threads", c.threads);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    try {
        return config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
}

std::vector<double> Grid::points() const {
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

Grid parse_grid(std::string_view spec) {
    const auto a = spec.find(':');
    const auto b = a == std::string_view::npos ? a : spec.find(':', a + 1);
    if (b == std::string_view::npos) throw ConfigError("grid must be lo:hi:step");
    Grid g{};
    try {
        std::size_t used = 0;
        auto num = [&](std::string_view s) {
            const std::string str(s);
            const double v = std::stod(str, &used);
            if (used != str.size()) throw ConfigError("bad number in grid");
            return v;
        };
        g.lo = num(spec.substr(0, a));
        g.hi = num(spec.substr(a + 1, b - a - 1));
        g.step = num(spec.substr(b + 1));
    } catch (const std::logic_error&) {
        throw ConfigError("grid must be lo:hi:step");
    }
    if (!(g.step > 0) || g.hi < g.lo) throw ConfigError("grid needs step > 0 and hi >= lo");
    return g;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // snprintf honours LC_NUMERIC; the output contract is a '.' decimal point.
    for (char& ch : s)
        if (ch == ',') ch = '.';
    return s;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
               const std::string& comment) {
    if (!comment.empty()) os << "# " << comment << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
}

nlohmann::json to_json(const QuadratureResult& r) {
    nlohmann::json circles = nlohmann::json::array();
    for (const auto& c : r.contour.circles)
        circles.push_back({{"center", {c.center.real(), c.center.imag()}}, {"radius", c.radius}});
    return {{"kind", "quadrature"},
            {"value", r.value.real()},
            {"value_imag", r.value.imag()},
            {"est_error", r.est_error},
            {"nodes_per_dim", r.nodes_per_dim},
            {"converged", r.converged},
            {"contour", circles}};
}

nlohmann::json to_json(const MCEstimate& e) {
    return {{"kind", "mc_estimate"}, {"mean", e.mean}, {"stderr", e.stderr_}, {"reps", e.reps}, {"seed", e.seed}};
}

nlohmann::json result_record(const RunConfig& c, nlohmann::json payload) {
    return {{"artifact_version", kArtifactVersion}, {"config", to_json(c, false)}, {"result", std::move(payload)}};
}

void write_meta(const std::string& out, const RunConfig& c, double wall_seconds) {
    if (out.empty()) return;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    const nlohmann::json meta = {{"artifact_version", kArtifactVersion},
                                 {"config", to_json(c, true)},
                                 {"wall_seconds", wall_seconds},
                                 {"timestamp", stamp},
                                 {"threads", c.threads}};
    std::ofstream(out + ".meta.json") << meta.dump(2) << '\n';
}

}  // namespace mtasep
