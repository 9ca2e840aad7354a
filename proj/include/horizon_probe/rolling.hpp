#pragma once

#include "horizon_probe/baseline.hpp"
#include "horizon_probe/ingest.hpp"
#include "horizon_probe/model.hpp"
#include "horizon_probe/solver.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace horizon_probe {

inline constexpr double kDefaultEpsilon = 1e-4;  // MW
inline constexpr std::size_t kDefaultMinHorizon = 2;
inline constexpr std::size_t kDefaultMaxHorizon = 88;

enum class WindowMode {
    /// Stop once the window no longer fits: t runs to T_max - T + 1.
    fixed,
    /// Keep going to T_max with windows shrinking at the end of the data.
    truncate_at_end,
};

struct RollingConfig {
    std::size_t horizon_T = 24;
    double epsilon = kDefaultEpsilon;
    std::size_t decision_steps = 1;  // only 1 is supported
    WindowMode window_mode = WindowMode::fixed;

    void validate() const;
};

struct RollingRun {
    std::vector<double> first_actions;  // net injection p_d - p_c per executed step
    Schedule realized;                  // objective == profit
    double profit = 0.0;
    bool feasible = true;  // false: a window had no solution, run stops there
};

/// Receding-horizon simulation: solve the window starting at t from the
/// propagated SoC, execute its first action, advance one step.
[[nodiscard]] RollingRun simulate_rolling(const PriceSeries& series, const EssParams& params,
                                          const RollingConfig& config, const SolverOptions& options = {});

/// Rolling run for one horizon plus its per-step agreement with the global
/// net action over the fixed-mode range. On a mismatch the rolling action is
/// still executed and the rolling SoC propagated.
struct HorizonSweep {
    std::size_t horizon_T = 0;
    std::vector<bool> cells;  // length T_max - T + 1; false past an infeasible window
    RollingRun run;

    [[nodiscard]] bool full_match() const;
    [[nodiscard]] double match_pct() const;
};

/// `mode` selects whether the run continues past the fixed-mode range.
/// Throws InputMismatch if `global` was built from other data.
[[nodiscard]] HorizonSweep sweep_horizon(const PriceSeries& series, const EssParams& params,
                                         const GlobalSolution& global, std::size_t horizon_T, double epsilon,
                                         const SolverOptions& options = {},
                                         WindowMode mode = WindowMode::truncate_at_end);

/// Evaluates sweep_horizon for every horizon, `parallelism` horizons at a
/// time. Output order follows `horizons` regardless of completion order.
[[nodiscard]] std::vector<HorizonSweep> sweep_horizons(const PriceSeries& series, const EssParams& params,
                                                       const GlobalSolution& global,
                                                       const std::vector<std::size_t>& horizons, double epsilon,
                                                       const SolverOptions& options = {},
                                                       WindowMode mode = WindowMode::truncate_at_end,
                                                       std::size_t parallelism = 1);

struct MatchMatrix {
    std::vector<std::size_t> horizons;
    std::size_t steps = 0;  // T_max; row for horizon T holds T_max - T + 1 cells
    std::vector<std::vector<bool>> cells;
    std::vector<double> match_pct;
};

[[nodiscard]] MatchMatrix match_matrix(const PriceSeries& series, const EssParams& params,
                                       const GlobalSolution& global, const std::vector<std::size_t>& horizons,
                                       double epsilon = kDefaultEpsilon, const SolverOptions& options = {},
                                       std::size_t parallelism = 1);

[[nodiscard]] MatchMatrix to_match_matrix(const std::vector<HorizonSweep>& sweeps, std::size_t steps);

struct HorizonSearchResult {
    std::optional<std::size_t> t_star;
    std::size_t range_lo = 0;
    std::size_t range_hi = 0;
    std::vector<std::size_t> tested;  // ascending, ends at t_star when found
    std::vector<bool> per_T_matched;  // parallel to `tested`
};

/**
 * Minimum forecast horizon search. For T ascending over [lo, hi], roll
 * through t = 1 .. T_max - T + 1 and compare each first-stage net action
 * with the global one; the first infeasible window or |difference| >
 * epsilon rejects T. Returns the first T that survives every step.
 *
 * With parallelism > 1, candidates are evaluated in ascending batches; the
 * result is identical to the sequential search.
 *
 * Throws InputMismatch if `global` was built from other data, and
 * InvalidArgument if the range is not within [2, T_max].
 */
[[nodiscard]] HorizonSearchResult find_min_horizon(const PriceSeries& series, const EssParams& params,
                                                   const GlobalSolution& global, std::size_t range_lo,
                                                   std::size_t range_hi, double epsilon = kDefaultEpsilon,
                                                   const SolverOptions& options = {}, std::size_t parallelism = 1);

/// `T,t1,...,tN`; cells 0/1, rows shorter than N padded with empty cells.
void write_match_matrix_csv(std::ostream& out, const MatchMatrix& matrix);
/// `T,match_pct`.
void write_match_pct_csv(std::ostream& out, const MatchMatrix& matrix);

}  // namespace horizon_probe
