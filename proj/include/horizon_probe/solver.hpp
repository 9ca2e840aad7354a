#pragma once

#include "horizon_probe/lp_core.hpp"
#include "horizon_probe/model.hpp"

#include <cstddef>
#include <optional>
#include <string_view>

namespace horizon_probe {

struct SolverOptions {
    double feas_tol = 1e-9;  // LP core primal tolerance
    double comp_tol = 1e-6;  // allowed min(p_c, p_d) per step
    bool relaxed_only = false;  // drop the no-simultaneity constraint
    std::size_t node_limit = 100000;
    lp::PivotRule pivot_rule = lp::PivotRule::bland;

    /// Throws InvalidArgument.
    void validate() const;

    friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

enum class SolveStatus { Optimal, Infeasible, NodeLimit };

[[nodiscard]] std::string_view to_string(SolveStatus status) noexcept;

struct SolveOutcome {
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<Schedule> schedule;  // present iff Optimal
    std::size_t nodes_explored = 0;
};

/**
 * Maximizes arbitrage profit over one price window.
 *
 * The LP relaxation (power bounds, SoC band and dynamics) is solved with the
 * chain simplex. Steps that charge and discharge simultaneously are then
 * removed by depth-first branch and bound: branch on the step with the
 * largest min(p_c, p_d), charge-only child first. Leaves with equal
 * objective are ordered by the lexicographically smaller
 * (p_c..., p_d...) vector, so the result is a pure function of the inputs.
 *
 * The returned objective is recomputed from the schedule with profit().
 */
[[nodiscard]] SolveOutcome solve(const ScheduleProblem& problem, const SolverOptions& options = {});

/// Exact reference for short windows: solves all 2^T charge-only /
/// discharge-only restrictions and keeps the best (same tie rule as solve).
/// Throws HorizonTooLong for more than 12 steps.
[[nodiscard]] SolveOutcome oracle_enumerate(const ScheduleProblem& problem, const SolverOptions& options = {});

inline constexpr std::size_t kOracleMaxSteps = 12;

/// LP-free reference: backward dynamic programming over `soc_grid` evenly
/// spaced SoC levels, with candidate actions taken from `power_grid` evenly
/// spaced net power levels and snapped onto neighbouring grid states. Every
/// transition is realized exactly, so the value is the profit of a feasible
/// schedule (a lower bound on the optimum) and tightens as grids refine.
/// Returns -infinity if no grid path is feasible. Throws InvalidArgument
/// for grids below 51 points.
[[nodiscard]] double oracle_grid_dp(const ScheduleProblem& problem, std::size_t soc_grid, std::size_t power_grid);

}  // namespace horizon_probe
