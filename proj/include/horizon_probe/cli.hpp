#pragma once

#include "horizon_probe/ingest.hpp"
#include "horizon_probe/model.hpp"
#include "horizon_probe/rolling.hpp"
#include "horizon_probe/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace horizon_probe {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Command { global, rolling, find_horizon, sweep, report };

[[nodiscard]] std::string_view to_string(Command command) noexcept;

/// Where prices come from: a CSV file or the synthetic generator.
struct PriceSource {
    std::optional<std::filesystem::path> csv;
    SyntheticKind kind = SyntheticKind::spiky_random;
    std::size_t length = 0;
    std::uint64_t seed = 0;
};

struct ExperimentConfig {
    PriceSource prices;
    EssParams ess = reference_params();
    double epsilon = kDefaultEpsilon;
    std::size_t t_lo = kDefaultMinHorizon;
    std::size_t t_hi = kDefaultMaxHorizon;
    SolverOptions solver;
    std::filesystem::path output_dir = "out";
    std::size_t parallelism = 1;

    // `rolling` command
    std::optional<std::size_t> rolling_T;
    WindowMode rolling_mode = WindowMode::truncate_at_end;

    // `report` command
    std::vector<std::size_t> profit_curve_horizons{4, 8, 12, 16, 20, 24, 28, 32, 36, 48, 60};
    std::optional<std::size_t> compare_T;  // defaults to T*, else the largest tested T

    /// Canonical JSON of the effective configuration (hashed into run logs).
    [[nodiscard]] nlohmann::json to_json() const;
};

/**
 * Reads and schema-checks a JSON experiment config. Relative paths resolve
 * against the config file's directory. Throws ConfigError naming the
 * offending key path, e.g. `config.ess.rho: rho must be in (0, 1]`.
 *
 * Top-level keys: `price_csv` or `synthetic` {kind, length, seed}; `ess`;
 * `epsilon`; `t_range` [lo, hi]; `solver`; `output_dir`; `parallelism`;
 * `rolling_window_mode`; `report` {profit_curve_horizons, compare_T}.
 */
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// 64-bit FNV-1a of the canonical config dump, as 16 hex digits.
[[nodiscard]] std::string config_hash(const ExperimentConfig& config);

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitSolver = 3;

/// Executes one command. Results go to config.output_dir, the headline to
/// `out`, one-line diagnostics to `err`.
int run(Command command, const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (`<command> --config <path> [--T k] [--out dir] [--parallel n]
/// [--seed n]`) and dispatches to run().
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace horizon_probe
