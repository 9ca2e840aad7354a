#pragma once

#include "horizon_probe/ingest.hpp"
#include "horizon_probe/model.hpp"
#include "horizon_probe/solver.hpp"

#include <filesystem>
#include <vector>

namespace horizon_probe {

inline constexpr int kSolutionFormatVersion = 1;

/// Full-horizon optimum: the reference every rolling run is compared with.
struct GlobalSolution {
    Schedule schedule;
    std::vector<double> cum_profit;  // prefix sums of per-step revenue
    PriceSeries prices;
    EssParams params;
    SolverOptions solver_options;

    friend bool operator==(const GlobalSolution&, const GlobalSolution&) = default;
};

/// One solve over the whole series. Throws SolverFailure on Infeasible or
/// NodeLimit.
[[nodiscard]] GlobalSolution solve_global(const PriceSeries& series, const EssParams& params,
                                          const SolverOptions& options = {});

/// `<stem>.json` next to the trajectory CSV.
[[nodiscard]] std::filesystem::path sidecar_path(const std::filesystem::path& trajectory_csv);

/// Writes the trajectory CSV and its JSON sidecar. Throws IoError.
void save_solution(const GlobalSolution& solution, const std::filesystem::path& trajectory_csv);

/// Throws IoError, or SchemaMismatch on version, shape or consistency errors.
[[nodiscard]] GlobalSolution load_solution(const std::filesystem::path& trajectory_csv);

}  // namespace horizon_probe
