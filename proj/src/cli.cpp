#include "horizon_probe/cli.hpp"

#include "horizon_probe/baseline.hpp"
#include "horizon_probe/errors.hpp"
#include "horizon_probe/json_io.hpp"
#include "horizon_probe/metrics.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace horizon_probe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kRunLog = "run_log.txt";

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// ---- config schema ---------------------------------------------------------

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) bad(path, "expected an object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) bad(path + "." + key, "unknown key");
    }
}

std::size_t get_count(const json& j, const std::string& path, std::size_t min) {
    if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min)) {
        bad(path, "expected an integer >= " + std::to_string(min));
    }
    return j.get<std::size_t>();
}

double get_positive(const json& j, const std::string& path) {
    if (!j.is_number() || !(j.get<double>() > 0.0)) bad(path, "expected a positive number");
    return j.get<double>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) bad(path, "expected a string");
    return j.get<std::string>();
}

WindowMode parse_window_mode(const std::string& text, const std::string& path) {
    if (text == "fixed") return WindowMode::fixed;
    if (text == "truncate-at-end") return WindowMode::truncate_at_end;
    bad(path, "expected 'fixed' or 'truncate-at-end', got '" + text + "'");
}

std::string_view to_string(WindowMode mode) {
    return mode == WindowMode::fixed ? "fixed" : "truncate-at-end";
}

// ---- data ------------------------------------------------------------------

PriceSeries load_series(const ExperimentConfig& config) {
    if (config.prices.csv) {
        const auto path = config.prices.csv->string();
        try {
            return load_price_csv(path);
        } catch (const IoError&) {
            throw;
        } catch (const DataError& e) {
            throw DataError(path + ": " + e.what());
        }
    }
    return generate_synthetic(config.prices.kind, config.prices.length, config.prices.seed);
}

void require_range_fits(const ExperimentConfig& config, std::size_t n) {
    if (config.t_hi > n) {
        bad("config.t_range", "upper bound " + std::to_string(config.t_hi) + " exceeds the series length " +
                                  std::to_string(n));
    }
}

void require_feasible(const std::vector<HorizonSweep>& sweeps) {
    for (const auto& s : sweeps) {
        if (!s.run.feasible) {
            throw SolverFailure("rolling run with T=" + std::to_string(s.horizon_T) +
                                " hit an infeasible window at step " + std::to_string(s.run.realized.length() + 1));
        }
    }
}

// ---- outputs ---------------------------------------------------------------

/// Writes result files and keeps the run log in step: one line per file,
/// `<file> command=<cmd> config=<hash> content=<hash> version=<v>`, sorted.
class OutputSet {
public:
    OutputSet(const ExperimentConfig& config, Command command)
        : dir_(config.output_dir), command_(to_string(command)), config_hash_(config_hash(config)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    }

    [[nodiscard]] fs::path path(const std::string& name) const { return dir_ / name; }

    void write(const std::string& name, const std::string& content) {
        const auto p = path(name);
        std::ofstream out(p, std::ios::binary);
        if (!out) throw IoError("cannot write '" + p.string() + "'");
        out << content;
        if (!out.flush()) throw IoError("write failed for '" + p.string() + "'");
        entries_[name] = fnv1a(content);
    }

    /// Registers a file written by someone else.
    void record(const std::string& name) {
        const auto p = path(name);
        std::ifstream in(p, std::ios::binary);
        if (!in) throw IoError("cannot read back '" + p.string() + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        entries_[name] = fnv1a(buf.str());
    }

    void write_run_log() const {
        std::map<std::string, std::string> lines;
        const auto log_path = path(std::string(kRunLog));
        if (std::ifstream in(log_path); in) {
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                lines[line.substr(0, line.find(' '))] = line;
            }
        }
        for (const auto& [name, hash] : entries_) {
            lines[name] = name + " command=" + std::string(command_) + " config=" + config_hash_ +
                          " content=" + hex64(hash) + " version=" + std::string(kVersion);
        }
        std::ofstream out(log_path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + log_path.string() + "'");
        for (const auto& [_, line] : lines) out << line << '\n';
    }

private:
    fs::path dir_;
    std::string_view command_;
    std::string config_hash_;
    std::map<std::string, std::uint64_t> entries_;
};

template <typename Fn>
std::string render(Fn&& fn) {
    std::ostringstream out;
    fn(out);
    return out.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string prices_csv(const PriceSeries& series) {
    return render([&](std::ostream& o) { write_price_csv(o, series); });
}

GlobalSolution write_global(OutputSet& outputs, const PriceSeries& series, const ExperimentConfig& config) {
    auto global = solve_global(series, config.ess, config.solver);
    save_solution(global, outputs.path("global_trajectory.csv"));
    outputs.record("global_trajectory.csv");
    outputs.record("global_trajectory.json");
    return global;
}

std::vector<std::size_t> range_horizons(const ExperimentConfig& config) {
    std::vector<std::size_t> hs;
    for (std::size_t T = config.t_lo; T <= config.t_hi; ++T) hs.push_back(T);
    return hs;
}

std::string profit_table_csv(const HorizonReport& report) {
    std::ostringstream o;
    o << "T,profit_eur,shortfall_abs_eur,shortfall_pct,avg_soc_dev_mwh,mismatch_count,match_pct\n";
    for (const auto& r : report.per_T) {
        o << r.T << ',' << format_double(r.profit) << ',' << format_double(r.shortfall_abs) << ','
          << (r.shortfall_pct ? format_double(*r.shortfall_pct) : "") << ',' << format_double(r.avg_soc_dev) << ','
          << r.mismatch_count << ',' << format_double(r.match_pct) << '\n';
    }
    return o.str();
}

// ---- commands --------------------------------------------------------------

int cmd_global(const ExperimentConfig& config, std::ostream& out) {
    const auto series = load_series(config);
    OutputSet outputs(config, Command::global);
    outputs.write("prices.csv", prices_csv(series));
    const auto global = write_global(outputs, series, config);
    outputs.write_run_log();
    out << "global profit = " << format_double(global.schedule.objective) << " EUR over " << series.size()
        << " steps\n";
    return kExitOk;
}

int cmd_rolling(const ExperimentConfig& config, std::ostream& out) {
    if (!config.rolling_T) throw ConfigError("rolling requires --T <k>");
    const std::size_t T = *config.rolling_T;
    const auto series = load_series(config);
    if (T < 2 || T > series.size()) {
        throw ConfigError("--T " + std::to_string(T) + " outside [2, " + std::to_string(series.size()) + "]");
    }
    RollingConfig rc;
    rc.horizon_T = T;
    rc.epsilon = config.epsilon;
    rc.window_mode = config.rolling_mode;
    const auto run = simulate_rolling(series, config.ess, rc, config.solver);

    OutputSet outputs(config, Command::rolling);
    const auto prices = series.prices();
    const std::string stem = "rolling_T" + std::to_string(T);
    outputs.write(stem + ".csv", render([&](std::ostream& o) {
                      write_trajectory_csv(o, run.realized, std::span(prices).first(run.realized.length()),
                                           config.ess.dt_hours);
                  }));
    json summary{{"format_version", kReportFormatVersion},
                 {"horizon_T", T},
                 {"window_mode", to_string(config.rolling_mode)},
                 {"steps", run.realized.length()},
                 {"feasible", run.feasible},
                 {"profit_eur", run.profit}};
    outputs.write(stem + ".json", dump(summary));
    outputs.write_run_log();

    if (!run.feasible) {
        throw SolverFailure("rolling run with T=" + std::to_string(T) + " hit an infeasible window at step " +
                            std::to_string(run.realized.length() + 1));
    }
    out << "rolling profit (T=" << T << ") = " << format_double(run.profit) << " EUR\n";
    return kExitOk;
}

void print_t_star(std::ostream& out, const std::optional<std::size_t>& t_star, std::size_t hi) {
    if (t_star) {
        out << "T* = " << *t_star << '\n';
    } else {
        out << "no forecast horizon found up to " << hi << '\n';
    }
}

int cmd_find_horizon(const ExperimentConfig& config, std::ostream& out) {
    const auto series = load_series(config);
    require_range_fits(config, series.size());
    OutputSet outputs(config, Command::find_horizon);
    const auto global = write_global(outputs, series, config);
    const auto result = find_min_horizon(series, config.ess, global, config.t_lo, config.t_hi, config.epsilon,
                                         config.solver, config.parallelism);
    json j{{"format_version", kReportFormatVersion},
           {"t_star", result.t_star ? json(*result.t_star) : json(nullptr)},
           {"range", {result.range_lo, result.range_hi}},
           {"epsilon", config.epsilon},
           {"steps", series.size()},
           {"global_profit_eur", global.schedule.objective},
           {"tested", result.tested},
           {"matched", result.per_T_matched}};
    outputs.write("horizon_search.json", dump(j));
    outputs.write_run_log();
    print_t_star(out, result.t_star, config.t_hi);
    return kExitOk;
}

struct SweepProducts {
    GlobalSolution global;
    std::vector<HorizonSweep> sweeps;
    HorizonReport report;
};

SweepProducts run_sweep(OutputSet& outputs, const PriceSeries& series, const ExperimentConfig& config) {
    auto global = write_global(outputs, series, config);
    auto sweeps = sweep_horizons(series, config.ess, global, range_horizons(config), config.epsilon, config.solver,
                                 WindowMode::truncate_at_end, config.parallelism);
    require_feasible(sweeps);
    const auto matrix = to_match_matrix(sweeps, series.size());
    outputs.write("match_matrix.csv", render([&](std::ostream& o) { write_match_matrix_csv(o, matrix); }));
    outputs.write("match_pct.csv", render([&](std::ostream& o) { write_match_pct_csv(o, matrix); }));
    auto report = compute_metrics(global, sweeps, config.epsilon);
    outputs.write("profit_by_T.csv", profit_table_csv(report));
    return {std::move(global), std::move(sweeps), std::move(report)};
}

int cmd_sweep(const ExperimentConfig& config, std::ostream& out) {
    const auto series = load_series(config);
    require_range_fits(config, series.size());
    OutputSet outputs(config, Command::sweep);
    const auto products = run_sweep(outputs, series, config);
    outputs.write_run_log();
    print_t_star(out, products.report.t_star, config.t_hi);
    return kExitOk;
}

int cmd_report(const ExperimentConfig& config, std::ostream& out) {
    const auto series = load_series(config);
    const std::size_t n = series.size();
    require_range_fits(config, n);
    for (std::size_t T : config.profit_curve_horizons) {
        if (T > n) bad("config.report.profit_curve_horizons", "T=" + std::to_string(T) + " exceeds the series length");
    }
    if (config.compare_T && *config.compare_T > n) bad("config.report.compare_T", "exceeds the series length");

    OutputSet outputs(config, Command::report);
    outputs.write("prices.csv", prices_csv(series));
    auto products = run_sweep(outputs, series, config);
    const auto& global = products.global;
    const auto& report = products.report;

    const std::size_t compare_T = config.compare_T.value_or(report.t_star.value_or(config.t_hi));

    // Runs for horizons the range sweep did not cover.
    std::map<std::size_t, const HorizonSweep*> by_T;
    for (const auto& s : products.sweeps) by_T[s.horizon_T] = &s;
    std::set<std::size_t> extra;
    for (std::size_t T : config.profit_curve_horizons) {
        if (!by_T.contains(T)) extra.insert(T);
    }
    if (!by_T.contains(compare_T)) extra.insert(compare_T);
    const auto extra_sweeps =
        sweep_horizons(series, config.ess, global, std::vector<std::size_t>(extra.begin(), extra.end()),
                       config.epsilon, config.solver, WindowMode::truncate_at_end, config.parallelism);
    require_feasible(extra_sweeps);
    for (const auto& s : extra_sweeps) by_T[s.horizon_T] = &s;

    const auto prices = series.prices();
    const double dt = config.ess.dt_hours;

    {
        const auto& cmp = *by_T.at(compare_T);
        const auto& g = global.schedule;
        const auto& r = cmp.run.realized;
        std::ostringstream o;
        o << "t,price_eur_mwh,global_p_charge_mw,global_p_discharge_mw,global_soc_mwh,rolling_p_charge_mw,"
             "rolling_p_discharge_mw,rolling_soc_mwh,match\n";
        for (std::size_t t = 0; t < n; ++t) {
            o << t + 1 << ',' << format_double(prices[t]) << ',' << format_double(g.p_charge[t]) << ','
              << format_double(g.p_discharge[t]) << ',' << format_double(g.soc[t]) << ','
              << format_double(r.p_charge[t]) << ',' << format_double(r.p_discharge[t]) << ','
              << format_double(r.soc[t]) << ',';
            if (t < cmp.cells.size()) o << (cmp.cells[t] ? '1' : '0');
            o << '\n';
        }
        outputs.write("rolling_vs_global.csv", o.str());
    }
    {
        std::vector<std::vector<double>> curves;
        std::ostringstream o;
        o << "t,global";
        for (std::size_t T : config.profit_curve_horizons) {
            o << ",T" << T;
            curves.push_back(cumulative_profit(by_T.at(T)->run.realized, prices, dt));
        }
        o << '\n';
        const auto g = cumulative_profit(global.schedule, prices, dt);
        for (std::size_t t = 0; t < n; ++t) {
            o << t + 1 << ',' << format_double(g[t]);
            for (const auto& c : curves) o << ',' << format_double(c[t]);
            o << '\n';
        }
        outputs.write("profit_curves.csv", o.str());
    }

    json summary = to_json(report);
    summary["steps"] = n;
    summary["t_range"] = {config.t_lo, config.t_hi};
    summary["compare_T"] = compare_T;
    summary["config_hash"] = config_hash(config);
    summary["version"] = kVersion;
    outputs.write("summary.json", dump(summary));
    outputs.write_run_log();

    print_t_star(out, report.t_star, config.t_hi);
    out << "global profit = " << format_double(global.schedule.objective) << " EUR\n";
    return kExitOk;
}

std::optional<Command> parse_command(std::string_view name) {
    if (name == "global") return Command::global;
    if (name == "rolling") return Command::rolling;
    if (name == "find-horizon") return Command::find_horizon;
    if (name == "sweep") return Command::sweep;
    if (name == "report") return Command::report;
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Command command) noexcept {
    switch (command) {
        case Command::global: return "global";
        case Command::rolling: return "rolling";
        case Command::find_horizon: return "find-horizon";
        case Command::sweep: return "sweep";
        case Command::report: return "report";
    }
    return "unknown";
}

json ExperimentConfig::to_json() const {
    json j;
    if (prices.csv) {
        j["price_csv"] = prices.csv->generic_string();
    } else {
        j["synthetic"] = {{"kind", horizon_probe::to_string(prices.kind)},
                          {"length", prices.length},
                          {"seed", prices.seed}};
    }
    j["ess"] = horizon_probe::to_json(ess);
    j["epsilon"] = epsilon;
    j["t_range"] = {t_lo, t_hi};
    j["solver"] = horizon_probe::to_json(solver);
    j["output_dir"] = output_dir.generic_string();
    j["parallelism"] = parallelism;
    j["rolling_window_mode"] = to_string(rolling_mode);
    if (rolling_T) j["rolling_T"] = *rolling_T;
    json report{{"profit_curve_horizons", profit_curve_horizons}};
    if (compare_T) report["compare_T"] = *compare_T;
    j["report"] = report;
    return j;
}

std::string config_hash(const ExperimentConfig& config) {
    // Parallelism and the output location do not affect results.
    auto j = config.to_json();
    j.erase("parallelism");
    j.erase("output_dir");
    return hex64(fnv1a(j.dump()));
}

ExperimentConfig parse_config(const json& j, const fs::path& base_dir) {
    const std::string root = "config";
    check_keys(j, root,
               {"price_csv", "synthetic", "ess", "epsilon", "t_range", "solver", "output_dir", "parallelism",
                "rolling_window_mode", "report"});
    ExperimentConfig c;

    const bool has_csv = j.contains("price_csv");
    const bool has_synth = j.contains("synthetic");
    if (has_csv == has_synth) bad(root, "exactly one of 'price_csv' or 'synthetic' is required");
    if (has_csv) {
        fs::path p = get_string(j["price_csv"], root + ".price_csv");
        c.prices.csv = p.is_absolute() ? p : base_dir / p;
    } else {
        const std::string sp = root + ".synthetic";
        const auto& s = j["synthetic"];
        check_keys(s, sp, {"kind", "length", "seed"});
        if (!s.contains("kind") || !s.contains("length")) bad(sp, "'kind' and 'length' are required");
        try {
            c.prices.kind = parse_synthetic_kind(get_string(s["kind"], sp + ".kind"));
        } catch (const InvalidArgument& e) {
            bad(sp + ".kind", e.what());
        }
        c.prices.length = get_count(s["length"], sp + ".length", 2);
        if (s.contains("seed")) {
            if (!s["seed"].is_number_unsigned()) bad(sp + ".seed", "expected a non-negative integer");
            c.prices.seed = s["seed"].get<std::uint64_t>();
        }
    }

    try {
        if (j.contains("ess")) c.ess = params_from_json(j["ess"], root + ".ess", c.ess);
        if (j.contains("solver")) c.solver = solver_options_from_json(j["solver"], root + ".solver", c.solver);
    } catch (const SchemaMismatch& e) {
        throw ConfigError(e.what());
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }

    if (j.contains("epsilon")) c.epsilon = get_positive(j["epsilon"], root + ".epsilon");
    if (j.contains("t_range")) {
        const auto& r = j["t_range"];
        if (!r.is_array() || r.size() != 2) bad(root + ".t_range", "expected [lo, hi]");
        c.t_lo = get_count(r[0], root + ".t_range[0]", 2);
        c.t_hi = get_count(r[1], root + ".t_range[1]", 2);
        if (c.t_lo > c.t_hi) bad(root + ".t_range", "lo must not exceed hi");
    }
    if (j.contains("output_dir")) {
        fs::path p = get_string(j["output_dir"], root + ".output_dir");
        c.output_dir = p.is_absolute() ? p : base_dir / p;
    } else {
        c.output_dir = base_dir / c.output_dir;
    }
    if (j.contains("parallelism")) c.parallelism = get_count(j["parallelism"], root + ".parallelism", 1);
    if (j.contains("rolling_window_mode")) {
        const std::string p = root + ".rolling_window_mode";
        c.rolling_mode = parse_window_mode(get_string(j["rolling_window_mode"], p), p);
    }
    if (j.contains("report")) {
        const std::string rp = root + ".report";
        const auto& r = j["report"];
        check_keys(r, rp, {"profit_curve_horizons", "compare_T"});
        if (r.contains("profit_curve_horizons")) {
            const auto& hs = r["profit_curve_horizons"];
            const std::string hp = rp + ".profit_curve_horizons";
            if (!hs.is_array()) bad(hp, "expected an array");
            c.profit_curve_horizons.clear();
            for (std::size_t i = 0; i < hs.size(); ++i) {
                c.profit_curve_horizons.push_back(get_count(hs[i], hp + "[" + std::to_string(i) + "]", 2));
            }
        }
        if (r.contains("compare_T")) c.compare_T = get_count(r["compare_T"], rp + ".compare_T", 2);
    }
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

int run(Command command, const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    try {
        spdlog::info("{}: config {}", to_string(command), config_hash(config));
        switch (command) {
            case Command::global: return cmd_global(config, out);
            case Command::rolling: return cmd_rolling(config, out);
            case Command::find_horizon: return cmd_find_horizon(config, out);
            case Command::sweep: return cmd_sweep(config, out);
            case Command::report: return cmd_report(config, out);
        }
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimum forecast horizon detection for rolling-horizon storage arbitrage", "horizon-probe"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::size_t> horizon;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> parallel;
    std::optional<std::uint64_t> seed;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"global", "solve the whole series once"},
        {"rolling", "simulate one rolling horizon (needs --T)"},
        {"find-horizon", "search the smallest horizon that reproduces the global schedule"},
        {"sweep", "evaluate every horizon in the configured range"},
        {"report", "sweep plus summary and figure data"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--parallel", parallel, "horizons evaluated concurrently")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "synthetic price seed (overrides config)");
        if (name == "rolling") sub->add_option("--T", horizon, "forecast horizon in steps")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    const auto* sub = app.get_subcommands().front();
    const auto command = parse_command(sub->get_name());

    ExperimentConfig config;
    try {
        config = load_config(config_path);
        if (seed) {
            if (config.prices.csv) throw ConfigError("--seed applies to synthetic prices only");
            config.prices.seed = *seed;
        }
        if (out_dir) config.output_dir = *out_dir;
        if (parallel) config.parallelism = *parallel;
        config.rolling_T = horizon;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    return run(*command, config, out, err);
}

}  // namespace horizon_probe
