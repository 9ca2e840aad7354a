#include "horizon_probe/baseline.hpp"

#include "horizon_probe/errors.hpp"
#include "horizon_probe/json_io.hpp"

#include <cmath>
#include <fstream>

namespace horizon_probe {

namespace {

using nlohmann::json;

template <typename T>
T sidecar_field(const json& j, const char* key, const std::filesystem::path& path) {
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaMismatch(path.string() + ": missing key '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw SchemaMismatch(path.string() + ": key '" + key + "' has the wrong type");
    }
}

}  // namespace

GlobalSolution solve_global(const PriceSeries& series, const EssParams& params, const SolverOptions& options) {
    params.validate();
    if (std::abs(series.dt_hours() - params.dt_hours) > 1e-12) {
        throw InputMismatch("series spacing " + std::to_string(series.dt_hours()) +
                            " h differs from params.dt_hours " + std::to_string(params.dt_hours));
    }
    const auto prices = series.prices();
    const auto problem = make_problem(params, prices);
    auto outcome = solve(problem, options);
    if (outcome.status != SolveStatus::Optimal) {
        throw SolverFailure("global solve over " + std::to_string(prices.size()) +
                            " steps: " + std::string(to_string(outcome.status)));
    }
    auto cum = cumulative_profit(*outcome.schedule, prices, params.dt_hours);
    return GlobalSolution{std::move(*outcome.schedule), std::move(cum), series, params, options};
}

std::filesystem::path sidecar_path(const std::filesystem::path& trajectory_csv) {
    auto p = trajectory_csv;
    p.replace_extension(".json");
    return p;
}

void save_solution(const GlobalSolution& solution, const std::filesystem::path& trajectory_csv) {
    const auto prices = solution.prices.prices();
    {
        std::ofstream out(trajectory_csv, std::ios::binary);
        if (!out) throw IoError("cannot write '" + trajectory_csv.string() + "'");
        write_trajectory_csv(out, solution.schedule, prices, solution.params.dt_hours);
        if (!out) throw IoError("write failed for '" + trajectory_csv.string() + "'");
    }
    const json sidecar{
        {"format_version", kSolutionFormatVersion},
        {"params", to_json(solution.params)},
        {"solver_options", to_json(solution.solver_options)},
        {"objective_eur", solution.schedule.objective},
        {"steps", prices.size()},
        {"series_start", format_timestamp(solution.prices.points().front().timestamp)},
        {"dt_hours", solution.prices.dt_hours()},
    };
    const auto side = sidecar_path(trajectory_csv);
    std::ofstream out(side, std::ios::binary);
    if (!out) throw IoError("cannot write '" + side.string() + "'");
    out << sidecar.dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + side.string() + "'");
}

GlobalSolution load_solution(const std::filesystem::path& trajectory_csv) {
    const auto side = sidecar_path(trajectory_csv);
    std::ifstream side_in(side);
    if (!side_in) throw IoError("cannot open '" + side.string() + "'");
    json sidecar;
    try {
        side_in >> sidecar;
    } catch (const json::exception& e) {
        throw SchemaMismatch(side.string() + ": " + e.what());
    }
    if (!sidecar.is_object()) throw SchemaMismatch(side.string() + ": expected a JSON object");
    const int version = sidecar_field<int>(sidecar, "format_version", side);
    if (version != kSolutionFormatVersion) {
        throw SchemaMismatch(side.string() + ": format_version " + std::to_string(version) + ", expected " +
                             std::to_string(kSolutionFormatVersion));
    }
    const auto params = params_from_json(sidecar_field<json>(sidecar, "params", side), "params");
    const auto options = solver_options_from_json(sidecar_field<json>(sidecar, "solver_options", side), "solver_options");
    const auto objective = sidecar_field<double>(sidecar, "objective_eur", side);
    const auto steps = sidecar_field<std::size_t>(sidecar, "steps", side);
    const auto dt = sidecar_field<double>(sidecar, "dt_hours", side);
    std::chrono::sys_seconds start;
    if (!parse_timestamp(sidecar_field<std::string>(sidecar, "series_start", side), start)) {
        throw SchemaMismatch(side.string() + ": bad series_start");
    }

    std::ifstream csv_in(trajectory_csv);
    if (!csv_in) throw IoError("cannot open '" + trajectory_csv.string() + "'");
    auto rows = read_trajectory_csv(csv_in);
    if (rows.prices.size() != steps) {
        throw SchemaMismatch(trajectory_csv.string() + ": " + std::to_string(rows.prices.size()) + " rows, sidecar says " +
                             std::to_string(steps));
    }

    std::vector<PricePoint> points(steps);
    const auto step = std::chrono::seconds(static_cast<long long>(std::llround(dt * 3600.0)));
    for (std::size_t i = 0; i < steps; ++i) {
        points[i] = {start + step * static_cast<long long>(i), rows.prices[i]};
    }
    PriceSeries series = [&] {
        try {
            return PriceSeries(std::move(points), dt);
        } catch (const Error& e) {
            throw SchemaMismatch(trajectory_csv.string() + ": " + e.what());
        }
    }();

    rows.schedule.objective = objective;
    const auto recomputed = cumulative_profit(rows.schedule, rows.prices, params.dt_hours);
    for (std::size_t i = 0; i < steps; ++i) {
        if (std::abs(recomputed[i] - rows.cum_profit[i]) > 1e-9 * std::max(1.0, std::abs(recomputed[i]))) {
            throw SchemaMismatch(trajectory_csv.string() + ": cum_profit inconsistent at t=" + std::to_string(i + 1));
        }
    }
    if (steps > 0 && std::abs(rows.cum_profit.back() - objective) > 1e-9 * std::max(1.0, std::abs(objective))) {
        throw SchemaMismatch(trajectory_csv.string() + ": final cum_profit disagrees with objective_eur");
    }
    return GlobalSolution{std::move(rows.schedule), std::move(rows.cum_profit), std::move(series), params, options};
}

}  // namespace horizon_probe
