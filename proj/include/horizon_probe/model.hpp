#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace horizon_probe {

/// Feasibility tolerance (MW / MWh) used when checking schedules and
/// problem invariants.
inline constexpr double kDefaultFeasTol = 1e-6;

/// Storage parameters. Powers in MW, energies in MWh, leakage per step.
struct EssParams {
    double p_charge_max = 1.0;
    double p_discharge_max = 1.0;
    double eta_c = 0.85;
    double eta_d = 0.85;
    double rho = 0.99;
    double soc_min = 0.0;
    double soc_max = 10.0;
    double soc_init = 5.0;
    double dt_hours = 1.0;

    /// Throws InvalidArgument naming the first violated bound.
    void validate() const;

    friend bool operator==(const EssParams&, const EssParams&) = default;
};

/// 1 MW / 10 MWh unit, 85 % one-way efficiencies, 1 %/h leakage, starting
/// half full. The reference configuration for the DK1 experiments.
[[nodiscard]] EssParams reference_params() noexcept;

/// One optimization instance: a price window and the SoC the storage enters
/// it with. `initial_soc` replaces params.soc_init so rolling windows can
/// start from the propagated state.
struct ScheduleProblem {
    EssParams params;
    std::vector<double> prices;
    double initial_soc = 0.0;

    [[nodiscard]] std::size_t length() const noexcept { return prices.size(); }

    /// Throws InvalidArgument. `initial_soc` may sit outside the SoC band by
    /// at most `tol` (propagated states carry rounding noise).
    void validate(double tol = kDefaultFeasTol) const;
};

[[nodiscard]] ScheduleProblem make_problem(const EssParams& params, std::span<const double> prices);
[[nodiscard]] ScheduleProblem make_problem(const EssParams& params, std::span<const double> prices,
                                           double initial_soc);

struct Schedule {
    std::vector<double> p_charge;
    std::vector<double> p_discharge;
    std::vector<double> soc;
    double objective = 0.0;  // EUR

    [[nodiscard]] std::size_t length() const noexcept { return soc.size(); }
    [[nodiscard]] double net(std::size_t t) const { return p_discharge[t] - p_charge[t]; }

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

enum class ViolationKind {
    SocBelowMin,
    SocAboveMax,
    ChargeOverCap,
    DischargeOverCap,
    NegativePower,
    DynamicsMismatch,
    Simultaneity,
};

[[nodiscard]] std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
    ViolationKind kind;
    std::size_t step;  // 1-based
    double magnitude;
};

/// s_next = rho * s_prev + dt * (eta_c * p_c - p_d / eta_d). Never clamps.
[[nodiscard]] double step_soc(double s_prev, double p_c, double p_d, const EssParams& params) noexcept;

/// Arbitrage revenue sum_t dt * price_t * (p_d - p_c). Throws LengthMismatch.
[[nodiscard]] double profit(std::span<const double> p_charge, std::span<const double> p_discharge,
                            std::span<const double> prices, double dt_hours);
[[nodiscard]] double profit(const Schedule& schedule, std::span<const double> prices, double dt_hours);

/// Per-step revenue dt * price_t * (p_d - p_c), prefix-summed.
[[nodiscard]] std::vector<double> cumulative_profit(const Schedule& schedule, std::span<const double> prices,
                                                    double dt_hours);

/// Checks bounds, dynamics (against problem.initial_soc) and
/// non-simultaneity. Empty result means the schedule is feasible within `tol`.
/// Throws LengthMismatch.
[[nodiscard]] std::vector<Violation> validate_schedule(const Schedule& schedule, const ScheduleProblem& problem,
                                                       double tol = kDefaultFeasTol);

inline constexpr std::string_view kTrajectoryCsvHeader =
    "t,price_eur_mwh,p_charge_mw,p_discharge_mw,soc_mwh,cum_profit_eur";

/// Trajectory CSV with 1-based t. Values use shortest round-trip formatting.
void write_trajectory_csv(std::ostream& out, const Schedule& schedule, std::span<const double> prices,
                          double dt_hours);

struct TrajectoryRows {
    std::vector<double> prices;
    Schedule schedule;  // objective left at 0
    std::vector<double> cum_profit;
};

/// Inverse of write_trajectory_csv. Throws SchemaMismatch.
[[nodiscard]] TrajectoryRows read_trajectory_csv(std::istream& in);

/// Shortest decimal text that parses back to exactly `value`.
[[nodiscard]] std::string format_double(double value);

}  // namespace horizon_probe
