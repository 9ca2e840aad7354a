#pragma once

#include "horizon_probe/baseline.hpp"
#include "horizon_probe/rolling.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace horizon_probe {

inline constexpr int kReportFormatVersion = 1;

/// Performance loss of one candidate horizon relative to the global optimum.
struct HorizonRow {
    std::size_t T = 0;
    double profit = 0.0;                 // EUR, full-length rolling run
    double shortfall_abs = 0.0;          // global_profit - profit
    std::optional<double> shortfall_pct;  // absent when global_profit == 0
    double avg_soc_dev = 0.0;            // MWh, mean |s_roll - s_global| over the matched range
    std::size_t mismatch_count = 0;
    double match_pct = 0.0;
    std::size_t steps = 0;  // matched-range length, T_max - T + 1
};

struct HorizonReport {
    std::vector<HorizonRow> per_T;  // ascending T
    std::optional<std::size_t> t_star;
    double epsilon = 0.0;
    double global_profit = 0.0;
};

/// Builds the report from full-length (truncate-at-end) sweeps. `t_star` is
/// the smallest T whose match row is entirely true.
///
/// Throws InputMismatch for duplicate horizons, runs that do not cover the
/// whole series, or match rows of the wrong length.
[[nodiscard]] HorizonReport compute_metrics(const GlobalSolution& global, std::span<const HorizonSweep> sweeps,
                                            double epsilon);

[[nodiscard]] nlohmann::json to_json(const HorizonReport& report);

}  // namespace horizon_probe
