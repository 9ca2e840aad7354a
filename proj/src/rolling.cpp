#include "horizon_probe/rolling.hpp"

#include "horizon_probe/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

namespace horizon_probe {

namespace {

struct RollPlan {
    std::size_t horizon_T;
    WindowMode mode;
    double epsilon;
    const Schedule* reference;  // compare against this when non-null
    bool stop_on_mismatch;
};

HorizonSweep roll(std::span<const double> prices, const EssParams& params, const RollPlan& plan,
                  const SolverOptions& options) {
    const std::size_t n = prices.size();
    const std::size_t T = plan.horizon_T;
    const std::size_t matched_range = n - T + 1;
    const std::size_t last = plan.mode == WindowMode::fixed ? matched_range : n;

    HorizonSweep out;
    out.horizon_T = T;
    if (plan.reference) out.cells.assign(matched_range, false);
    auto& run = out.run;
    auto& realized = run.realized;
    realized.p_charge.reserve(last);
    realized.p_discharge.reserve(last);
    realized.soc.reserve(last);
    run.first_actions.reserve(last);

    double soc = params.soc_init;
    for (std::size_t t = 0; t < last; ++t) {
        const std::size_t width = std::min(T, n - t);
        ScheduleProblem problem{params, std::vector<double>(prices.begin() + t, prices.begin() + t + width), soc};
        const auto outcome = solve(problem, options);
        if (outcome.status != SolveStatus::Optimal) {
            spdlog::debug("T={} infeasible window at t={} ({})", T, t + 1, to_string(outcome.status));
            run.feasible = false;
            break;
        }
        const double pc = outcome.schedule->p_charge.front();
        const double pd = outcome.schedule->p_discharge.front();
        const double net = pd - pc;

        bool match = true;
        if (plan.reference && t < matched_range) {
            match = std::abs(net - plan.reference->net(t)) <= plan.epsilon;
            out.cells[t] = match;
        }

        soc = step_soc(soc, pc, pd, params);
        realized.p_charge.push_back(pc);
        realized.p_discharge.push_back(pd);
        realized.soc.push_back(soc);
        run.first_actions.push_back(net);

        if (!match && plan.stop_on_mismatch) {
            spdlog::debug("T={} first mismatch at t={}", T, t + 1);
            break;
        }
    }
    run.profit = profit(realized, prices.first(realized.length()), params.dt_hours);
    realized.objective = run.profit;
    return out;
}

void require_same_inputs(const PriceSeries& series, const EssParams& params, const GlobalSolution& global) {
    if (!(global.params == params)) throw InputMismatch("global solution was built with different parameters");
    if (!(global.prices == series)) throw InputMismatch("global solution was built from a different price series");
}

void require_horizon(std::size_t T, std::size_t n) {
    if (T < 2 || T > n) {
        throw InvalidArgument("horizon " + std::to_string(T) + " outside [2, " + std::to_string(n) + "]");
    }
}

// Runs fn(i) for i in [0, count) on up to `parallelism` threads. The first
// exception thrown by any task is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t parallelism, Fn&& fn) {
    parallelism = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(count, 1));
    if (parallelism == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::jthread> workers;
    workers.reserve(parallelism);
    for (std::size_t w = 0; w < parallelism; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    workers.clear();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

void RollingConfig::validate() const {
    if (horizon_T < 2) throw InvalidArgument("horizon_T must be >= 2");
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
    if (decision_steps != 1) throw InvalidArgument("only decision_steps = 1 is supported");
}

RollingRun simulate_rolling(const PriceSeries& series, const EssParams& params, const RollingConfig& config,
                            const SolverOptions& options) {
    config.validate();
    params.validate();
    if (std::abs(series.dt_hours() - params.dt_hours) > 1e-12) {
        throw InputMismatch("series spacing differs from params.dt_hours");
    }
    const auto prices = series.prices();
    require_horizon(config.horizon_T, prices.size());
    RollPlan plan{config.horizon_T, config.window_mode, config.epsilon, nullptr, false};
    return roll(prices, params, plan, options).run;
}

bool HorizonSweep::full_match() const {
    return std::all_of(cells.begin(), cells.end(), [](bool c) { return c; });
}

double HorizonSweep::match_pct() const {
    if (cells.empty()) return 0.0;
    const auto matched = std::count(cells.begin(), cells.end(), true);
    return 100.0 * static_cast<double>(matched) / static_cast<double>(cells.size());
}

HorizonSweep sweep_horizon(const PriceSeries& series, const EssParams& params, const GlobalSolution& global,
                           std::size_t horizon_T, double epsilon, const SolverOptions& options, WindowMode mode) {
    require_same_inputs(series, params, global);
    const auto prices = series.prices();
    require_horizon(horizon_T, prices.size());
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
    RollPlan plan{horizon_T, mode, epsilon, &global.schedule, false};
    auto sweep = roll(prices, params, plan, options);
    spdlog::info("T={} match {:.2f}% profit {:.4f}", horizon_T, sweep.match_pct(), sweep.run.profit);
    return sweep;
}

std::vector<HorizonSweep> sweep_horizons(const PriceSeries& series, const EssParams& params,
                                         const GlobalSolution& global, const std::vector<std::size_t>& horizons,
                                         double epsilon, const SolverOptions& options, WindowMode mode,
                                         std::size_t parallelism) {
    require_same_inputs(series, params, global);
    for (std::size_t T : horizons) require_horizon(T, series.size());
    std::vector<HorizonSweep> out(horizons.size());
    parallel_for(horizons.size(), parallelism, [&](std::size_t i) {
        out[i] = sweep_horizon(series, params, global, horizons[i], epsilon, options, mode);
    });
    return out;
}

MatchMatrix to_match_matrix(const std::vector<HorizonSweep>& sweeps, std::size_t steps) {
    MatchMatrix m;
    m.steps = steps;
    for (const auto& s : sweeps) {
        m.horizons.push_back(s.horizon_T);
        m.cells.push_back(s.cells);
        m.match_pct.push_back(s.match_pct());
    }
    return m;
}

MatchMatrix match_matrix(const PriceSeries& series, const EssParams& params, const GlobalSolution& global,
                         const std::vector<std::size_t>& horizons, double epsilon, const SolverOptions& options,
                         std::size_t parallelism) {
    const auto sweeps =
        sweep_horizons(series, params, global, horizons, epsilon, options, WindowMode::fixed, parallelism);
    return to_match_matrix(sweeps, series.size());
}

HorizonSearchResult find_min_horizon(const PriceSeries& series, const EssParams& params,
                                     const GlobalSolution& global, std::size_t range_lo, std::size_t range_hi,
                                     double epsilon, const SolverOptions& options, std::size_t parallelism) {
    require_same_inputs(series, params, global);
    if (range_lo < 2 || range_hi > series.size() || range_lo > range_hi) {
        throw InvalidArgument("horizon range [" + std::to_string(range_lo) + ", " + std::to_string(range_hi) +
                              "] not within [2, " + std::to_string(series.size()) + "]");
    }
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");

    const auto prices = series.prices();
    HorizonSearchResult result;
    result.range_lo = range_lo;
    result.range_hi = range_hi;
    parallelism = std::max<std::size_t>(parallelism, 1);

    for (std::size_t batch_lo = range_lo; batch_lo <= range_hi; batch_lo += parallelism) {
        const std::size_t batch_hi = std::min(range_hi, batch_lo + parallelism - 1);
        std::vector<char> matched(batch_hi - batch_lo + 1, 0);
        parallel_for(matched.size(), parallelism, [&](std::size_t i) {
            RollPlan plan{batch_lo + i, WindowMode::fixed, epsilon, &global.schedule, true};
            const auto sweep = roll(prices, params, plan, options);
            matched[i] = sweep.run.feasible && sweep.full_match();
        });
        for (std::size_t i = 0; i < matched.size(); ++i) {
            const std::size_t T = batch_lo + i;
            spdlog::info("T={} {}", T, matched[i] ? "matches" : "rejected");
            result.tested.push_back(T);
            result.per_T_matched.push_back(matched[i] != 0);
            if (matched[i]) {
                result.t_star = T;
                return result;
            }
        }
    }
    return result;
}

void write_match_matrix_csv(std::ostream& out, const MatchMatrix& matrix) {
    out << 'T';
    for (std::size_t t = 1; t <= matrix.steps; ++t) out << ",t" << t;
    out << '\n';
    for (std::size_t r = 0; r < matrix.horizons.size(); ++r) {
        out << matrix.horizons[r];
        const auto& row = matrix.cells[r];
        for (std::size_t t = 0; t < matrix.steps; ++t) {
            out << ',';
            if (t < row.size()) out << (row[t] ? '1' : '0');
        }
        out << '\n';
    }
}

void write_match_pct_csv(std::ostream& out, const MatchMatrix& matrix) {
    out << "T,match_pct\n";
    for (std::size_t r = 0; r < matrix.horizons.size(); ++r) {
        out << matrix.horizons[r] << ',' << format_double(matrix.match_pct[r]) << '\n';
    }
}

}  // namespace horizon_probe
