#include "mtasep/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "mtasep/duality.hpp"
#include "mtasep/errors.hpp"
#include "mtasep/estimators.hpp"
#include "mtasep/io.hpp"
#include "mtasep/limits.hpp"
#include "mtasep/parallel.hpp"

namespace mtasep {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Sink {
public:
    Sink(const RunConfig& c, std::ostream& fallback) : c_(c), fallback_(fallback) {}
    std::ostream& stream() { return c_.out.empty() ? static_cast<std::ostream&>(fallback_) : buffer_; }
    void finish(double wall) {
        if (c_.out.empty()) return;
        std::ofstream f(c_.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + c_.out);
        f << buffer_.str();
        write_meta(c_.out, c_, wall);
    }

private:
    const RunConfig& c_;
    std::ostream& fallback_;
    std::ostringstream buffer_;
};

LeaderEventSpec spec_from(const RunConfig& c, LeaderEventKind kind) { return {kind, c.k1, c.k2, c.k3, c.site}; }

void write_event_log(const std::string& path, const Configuration& init, double t, std::uint64_t seed) {
    EventLog log;
    simulate_tasep(init, t, ClockStream(seed, 0), &log);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    log.write_jsonl(f);
}

int cmd_integral(const RunConfig& c, std::ostream& os, std::ostream& err) {
    QuadratureOptions qo;
    qo.tol = c.tol;
    QuadratureResult r;
    if (c.formula == "M_C") {
        r = prob_M_C(c.nu, c.mu, c.t, qo);
    } else {
        const auto kind = parse_leader_event(c.formula);
        if (!kind) throw UsageError("unknown formula '" + c.formula + "'");
        r = leader_event_quadrature(spec_from(c, *kind), c.t, qo);
    }
    os << result_record(c, to_json(r)).dump(2) << '\n';
    if (!r.converged) {
        err << "quadrature did not reach tol " << c.tol << " (estimated error " << r.est_error << ")\n";
        return kExitFailure;
    }
    return kExitOk;
}

nlohmann::json estimate_payload(const MCEstimate& e, const std::string& observable, double t) {
    nlohmann::json j = to_json(e);
    j["observable"] = observable;
    j["t"] = t;
    return j;
}

int cmd_simulate(const RunConfig& c, std::ostream& os) {
    if (c.reps < 2) throw UsageError("simulate needs --reps >= 2");
    const McOptions mo{c.reps, c.seed, c.threads, c.delta};
    if (const auto kind = parse_leader_event(c.observable)) {
        const LeaderEventSpec spec = spec_from(c, *kind);
        const auto v = leader_event_samples(spec, c.t, mo);
        os << result_record(c, estimate_payload(summarize(v, c.seed), c.observable, c.t)).dump() << '\n';
        if (!c.event_log.empty()) write_event_log(c.event_log, leader_event_start(spec, c.t, c.delta), c.t, c.seed);
        return kExitOk;
    }
    if (c.observable == "leader_changes") {
        const auto rows = leader_change_samples(c.k1, c.t_grid, mo);
        for (std::size_t i = 0; i < c.t_grid.size(); ++i) {
            std::vector<double> v;
            v.reserve(rows.size());
            for (const auto& r : rows) v.push_back(static_cast<double>(r[i]));
            os << result_record(c, estimate_payload(summarize(v, c.seed), c.observable, c.t_grid[i])).dump() << '\n';
        }
        if (!c.event_log.empty()) {
            const double horizon = c.t_grid.back();
            const Int ceiling = tail_ceiling(c.k1, horizon, c.delta);
            write_event_log(c.event_log, clamped_leader_start(c.k1, ceiling, horizon, c.delta), horizon, c.seed);
        }
        return kExitOk;
    }
    if (c.observable == "voter_e0" || c.observable == "coalescence_e0") {
        if (!c.event_log.empty()) throw UsageError("event logs record TASEP swaps; not available for " + c.observable);
        const auto proc = c.observable == "voter_e0" ? E0Process::Voter : E0Process::Coalescence;
        const auto v = e0_samples(proc, c.t, mo);
        os << result_record(c, estimate_payload(summarize(v, c.seed), c.observable, c.t)).dump() << '\n';
        return kExitOk;
    }
    throw UsageError("unknown observable '" + c.observable + "'");
}

int cmd_density(const RunConfig& c, std::ostream& os) {
    const auto pts = parse_grid(c.grid).points();
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    if (c.law == "leader_type") {
        header = {"a", "density", "survival"};
        for (double a : pts) rows.push_back({a, density_leader(a), survival_leader(a)});
    } else if (c.law == "conditional_type") {
        header = {"a", "density", "survival"};
        for (double a : pts) rows.push_back({a, conditional_type_density(a, c.x), joint_position_type_survival(c.x, a)});
    } else if (c.law == "two_leader") {
        header = {"a2", "a3", "density"};
        for (double a2 : pts)
            for (double a3 : pts) rows.push_back({a2, a3, joint_two_leader_density(a2, a3)});
    } else {
        throw UsageError("unknown law '" + c.law + "'");
    }
    const nlohmann::json meta = result_record(c, {{"kind", "density_table"}, {"law", c.law}, {"rows", rows.size()}});
    write_csv(os, header, rows, meta.dump());
    return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
    const DualityOptions o{c.seed, c.reps, 1e-3, c.threads, c.delta};
    SuiteReport s;
    if (c.suite == "dualities")
        s = run_duality_suite(c.t, o);
    else if (c.suite == "formulas")
        s = run_formula_suite(c.t, o);
    else
        throw UsageError("unknown suite '" + c.suite + "'");
    nlohmann::json payload = to_json(s);
    payload["kind"] = "suite_report";
    os << result_record(c, payload).dump(2) << '\n';
    return s.pass ? kExitOk : kExitFailure;
}

int cmd_convergence(const RunConfig& c, std::ostream& os) {
    QuadratureOptions qo;
    qo.tol = c.tol;
    nlohmann::json leader_type = nlohmann::json::array(), changes = nlohmann::json::array();
    std::uint64_t index = 0;
    for (double t : c.t_grid) {
        for (double a : c.a) {
            const Int k2 = std::max<Int>(1, static_cast<Int>(std::ceil(a * std::sqrt(t))));
            const double q = prob_leader_type_ge(0, k2, t, qo).value.real();
            const double limit = survival_leader(a);
            nlohmann::json row = {{"t", t}, {"a", a}, {"k2", k2}, {"quadrature", q}, {"limit", limit},
                                  {"abs_diff", std::abs(q - limit)}};
            if (c.reps >= 2) {
                const std::uint64_t seed = derive_seed(c.seed, index);
                const auto v = leader_event_samples({LeaderEventKind::TypeGe, 0, k2}, t,
                                                    {c.reps, seed, c.threads, c.delta});
                const MCEstimate e = summarize(v, seed);
                row["mc_mean"] = e.mean;
                row["mc_stderr"] = e.stderr_;
                row["mc_seed"] = seed;
            }
            ++index;
            leader_type.push_back(row);
        }
        const double v = t * prob_adjacent_inverted(t, qo).value.real();
        changes.push_back({{"t", t},
                           {"t_times_quadrature", v},
                           {"limit", leader_changes_constant()},
                           {"abs_diff", std::abs(v - leader_changes_constant())}});
    }
    const nlohmann::json payload = {{"kind", "convergence"}, {"leader_type", leader_type}, {"leader_changes_rate", changes}};
    os << result_record(c, payload).dump(2) << '\n';
    return kExitOk;
}

std::vector<nlohmann::json> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::vector<nlohmann::json> out;
    auto ends_with = [&](const std::string& suffix) {
        return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    try {
        if (ends_with(".jsonl")) {
            std::string line;
            while (std::getline(in, line))
                if (!line.empty()) out.push_back(nlohmann::json::parse(line));
        } else if (ends_with(".csv") || in.peek() == '#') {
            std::string line;
            std::getline(in, line);
            if (line.rfind("# ", 0) != 0) throw UsageError(path + ": CSV without an embedded config line");
            out.push_back(nlohmann::json::parse(line.substr(2)));
        } else {
            out.push_back(nlohmann::json::parse(in));
        }
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
    for (const auto& r : out)
        if (!r.is_object() || !r.contains("artifact_version") || !r.contains("config"))
            throw UsageError(path + ": not a result record");
    return out;
}

nlohmann::json summarize_record(const nlohmann::json& r) {
    nlohmann::json s = {{"command", r["config"].value("command", "")}};
    const nlohmann::json& res = r.contains("result") ? r["result"] : nlohmann::json::object();
    const std::string kind = res.value("kind", "");
    s["kind"] = kind;
    if (kind == "quadrature") {
        s["value"] = res["value"];
        s["converged"] = res["converged"];
    } else if (kind == "mc_estimate") {
        s["observable"] = res["observable"];
        s["t"] = res["t"];
        s["mean"] = res["mean"];
        s["stderr"] = res["stderr"];
    } else if (kind == "suite_report") {
        s["suite"] = res["suite"];
        s["verdict"] = res["verdict"];
    } else if (kind == "density_table") {
        s["law"] = res["law"];
        s["rows"] = res["rows"];
    }
    return s;
}

int cmd_report(const RunConfig& c, std::ostream& os, std::ostream& err) {
    if (c.inputs.empty()) throw UsageError("report needs input files");
    std::set<std::string> versions;
    nlohmann::json inputs = nlohmann::json::array();
    bool all_pass = true;
    for (const auto& path : c.inputs) {
        nlohmann::json items = nlohmann::json::array();
        for (const auto& r : read_records(path)) {
            versions.insert(r["artifact_version"].get<std::string>());
            items.push_back(summarize_record(r));
            if (items.back().value("verdict", "pass") != "pass") all_pass = false;
        }
        inputs.push_back({{"path", path}, {"records", items}});
    }
    if (versions.size() > 1) {
        err << "refusing to aggregate mixed artifact versions:";
        for (const auto& v : versions) err << ' ' << v;
        err << '\n';
        return kExitFailure;
    }
    const nlohmann::json payload = {{"kind", "report"}, {"inputs", inputs}, {"all_suites_pass", all_pass}};
    os << result_record(c, payload).dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-type TASEP leaders: simulation, contour quadrature, limit laws and duality checks", "mtasep"};
    app.require_subcommand(1, 1);

    RunConfig flags;
    std::string config_path;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> bound;
    auto bind = [&](CLI::App* sub, const std::string& name, auto RunConfig::*field, const std::string& desc) {
        CLI::Option* o = sub->add_option(name, flags.*field, desc);
        bound.emplace_back(o, [field, &flags](RunConfig& c) { c.*field = flags.*field; });
        return o;
    };
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration; flags override its values")
            ->check(CLI::ExistingFile);
        bind(sub, "--t", &RunConfig::t, "time")->check(CLI::NonNegativeNumber);
        bind(sub, "--reps", &RunConfig::reps, "Monte Carlo replicas");
        bind(sub, "--seed", &RunConfig::seed, "base seed");
        bind(sub, "--delta", &RunConfig::delta, "window failure probability")->check(CLI::Range(1e-300, 0.5));
        bind(sub, "--tol", &RunConfig::tol, "quadrature tolerance")->check(CLI::PositiveNumber);
        bind(sub, "--threads", &RunConfig::threads, "worker threads (default from MTASEP_THREADS)")
            ->check(CLI::Range(1u, 4096u));
        bind(sub, "--out", &RunConfig::out, "output file (default stdout)");
    };
    auto cutoffs = [&](CLI::App* sub) {
        bind(sub, "--k1", &RunConfig::k1, "first cutoff");
        bind(sub, "--k2", &RunConfig::k2, "second cutoff");
        bind(sub, "--k3", &RunConfig::k3, "third cutoff");
        bind(sub, "--site", &RunConfig::site, "leader position for leader_type_ge_at");
    };

    auto* integral = app.add_subcommand("integral", "evaluate a contour-integral formula");
    common(integral);
    cutoffs(integral);
    bind(integral, "--formula", &RunConfig::formula,
         "leader_type_ge | leader_type_ge_at | two_leaders_gt | two_leaders_between | adjacent_inverted | M_C");
    bind(integral, "--nu", &RunConfig::nu, "initial dual positions for M_C")->delimiter(',');
    bind(integral, "--mu", &RunConfig::mu, "final dual positions for M_C")->delimiter(',');

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of an observable");
    common(simulate);
    cutoffs(simulate);
    bind(simulate, "--observable", &RunConfig::observable,
         "a leader formula name | leader_changes | voter_e0 | coalescence_e0");
    bind(simulate, "--t-grid", &RunConfig::t_grid, "observation times for leader_changes")->delimiter(',');
    bind(simulate, "--event-log", &RunConfig::event_log, "JSONL swap log of replica 0");

    auto* density = app.add_subcommand("density", "tabulate a limit density as CSV");
    common(density);
    bind(density, "--law", &RunConfig::law, "leader_type | conditional_type | two_leader");
    bind(density, "--grid", &RunConfig::grid, "lo:hi:step");
    bind(density, "--x", &RunConfig::x, "scaled leader position for conditional_type");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    common(verify);
    bind(verify, "--suite", &RunConfig::suite, "dualities | formulas");

    auto* convergence = app.add_subcommand("convergence", "finite-t values against limit laws");
    common(convergence);
    bind(convergence, "--t-grid", &RunConfig::t_grid, "times")->delimiter(',');
    bind(convergence, "--a", &RunConfig::a, "scaled type levels")->delimiter(',');

    auto* report = app.add_subcommand("report", "aggregate result files");
    common(report);
    bind(report, "inputs", &RunConfig::inputs, "result files");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    RunConfig c;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            const nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
            if (j.is_discarded()) throw ConfigError("config " + config_path + " is not valid JSON");
            c = config_from_json(j);
            if (!j.contains("threads")) c.threads = default_threads();
        } else {
            c.threads = default_threads();
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    for (auto& [opt, apply] : bound)
        if (opt->count() > 0) apply(c);
    c.command = sub->get_name();

    const auto start = std::chrono::steady_clock::now();
    try {
        Sink sink(c, out);
        int code = kExitOk;
        if (c.command == "integral") code = cmd_integral(c, sink.stream(), err);
        else if (c.command == "simulate") code = cmd_simulate(c, sink.stream());
        else if (c.command == "density") code = cmd_density(c, sink.stream());
        else if (c.command == "verify") code = cmd_verify(c, sink.stream());
        else if (c.command == "convergence") code = cmd_convergence(c, sink.stream());
        else code = cmd_report(c, sink.stream(), err);
        sink.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        return code;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace mtasep
