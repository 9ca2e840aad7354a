#include "horizon_probe/metrics.hpp"

#include "horizon_probe/errors.hpp"

#include <algorithm>
#include <cmath>

namespace horizon_probe {

HorizonReport compute_metrics(const GlobalSolution& global, std::span<const HorizonSweep> sweeps, double epsilon) {
    const std::size_t n = global.schedule.length();
    HorizonReport report;
    report.epsilon = epsilon;
    report.global_profit = global.schedule.objective;

    for (const auto& sweep : sweeps) {
        const std::size_t T = sweep.horizon_T;
        const auto& run = sweep.run;
        if (T < 2 || T > n || sweep.cells.size() != n - T + 1) {
            throw InputMismatch("match row for T=" + std::to_string(T) + " does not fit a series of " +
                                std::to_string(n) + " steps");
        }
        if (!run.feasible || run.realized.length() != n) {
            throw InputMismatch("rolling run for T=" + std::to_string(T) + " does not cover the whole series");
        }

        HorizonRow row;
        row.T = T;
        row.profit = run.profit;
        row.shortfall_abs = report.global_profit - run.profit;
        if (report.global_profit != 0.0) {
            row.shortfall_pct = 100.0 * row.shortfall_abs / std::abs(report.global_profit);
        }
        row.steps = sweep.cells.size();
        double dev = 0.0;
        for (std::size_t t = 0; t < row.steps; ++t) {
            dev += std::abs(run.realized.soc[t] - global.schedule.soc[t]);
        }
        row.avg_soc_dev = dev / static_cast<double>(row.steps);
        row.mismatch_count = static_cast<std::size_t>(std::count(sweep.cells.begin(), sweep.cells.end(), false));
        row.match_pct = sweep.match_pct();
        report.per_T.push_back(row);
    }

    std::sort(report.per_T.begin(), report.per_T.end(), [](const auto& a, const auto& b) { return a.T < b.T; });
    for (std::size_t i = 1; i < report.per_T.size(); ++i) {
        if (report.per_T[i].T == report.per_T[i - 1].T) {
            throw InputMismatch("duplicate horizon T=" + std::to_string(report.per_T[i].T));
        }
    }
    for (const auto& row : report.per_T) {
        if (row.mismatch_count == 0) {
            report.t_star = row.T;
            break;
        }
    }
    return report;
}

nlohmann::json to_json(const HorizonReport& report) {
    using nlohmann::json;
    json rows = json::array();
    for (const auto& r : report.per_T) {
        rows.push_back(json{
            {"T", r.T},
            {"profit", r.profit},
            {"shortfall_abs", r.shortfall_abs},
            {"shortfall_pct", r.shortfall_pct ? json(*r.shortfall_pct) : json(nullptr)},
            {"avg_soc_dev", r.avg_soc_dev},
            {"mismatch_count", r.mismatch_count},
            {"match_pct", r.match_pct},
            {"steps", r.steps},
        });
    }
    return json{
        {"format_version", kReportFormatVersion},
        {"t_star", report.t_star ? json(*report.t_star) : json(nullptr)},
        {"epsilon", report.epsilon},
        {"global_profit_eur", report.global_profit},
        {"per_T", std::move(rows)},
    };
}

}  // namespace horizon_probe
