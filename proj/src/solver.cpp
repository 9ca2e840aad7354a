#include "horizon_probe/solver.hpp"

#include "horizon_probe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace horizon_probe {

namespace {

enum class Restriction : std::uint8_t { none, charge_only, discharge_only };

// The relaxation of one window as a chain LP. Row t balances the SoC of
// step t; s_t links rows t and t+1.
struct StorageLp {
    lp::ChainLp lp;
    std::vector<std::size_t> charge, discharge, soc;
};

StorageLp build_lp(const ScheduleProblem& problem) {
    const auto& par = problem.params;
    const std::size_t n = problem.length();
    std::vector<double> rhs(n, 0.0);
    rhs[0] = par.rho * problem.initial_soc;

    StorageLp out{lp::ChainLp(std::move(rhs)), {}, {}, {}};
    out.charge.reserve(n);
    out.discharge.reserve(n);
    out.soc.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double revenue = par.dt_hours * problem.prices[t];
        out.charge.push_back(out.lp.add_column(t, -par.dt_hours * par.eta_c, revenue, 0.0, par.p_charge_max));
        out.discharge.push_back(
            out.lp.add_column(t, par.dt_hours / par.eta_d, -revenue, 0.0, par.p_discharge_max));
        if (t + 1 < n) {
            out.soc.push_back(out.lp.add_linking_column(t, 1.0, -par.rho, 0.0, par.soc_min, par.soc_max));
        } else {
            out.soc.push_back(out.lp.add_column(t, 1.0, 0.0, par.soc_min, par.soc_max));
        }
    }
    return out;
}

struct NodeResult {
    bool feasible = false;
    bool iteration_limit = false;
    double bound = 0.0;  // LP profit
    Schedule schedule;
};

NodeResult solve_node(StorageLp& base, const ScheduleProblem& problem, const std::vector<Restriction>& restrict,
                      const SolverOptions& options) {
    const auto& par = problem.params;
    for (std::size_t t = 0; t < restrict.size(); ++t) {
        base.lp.set_bounds(base.charge[t], 0.0, restrict[t] == Restriction::discharge_only ? 0.0 : par.p_charge_max);
        base.lp.set_bounds(base.discharge[t], 0.0,
                           restrict[t] == Restriction::charge_only ? 0.0 : par.p_discharge_max);
    }
    lp::Options lp_options;
    lp_options.feas_tol = options.feas_tol;
    lp_options.pivot_rule = options.pivot_rule;
    const auto result = base.lp.solve(lp_options, base.soc);

    NodeResult node;
    if (result.status == lp::Status::iteration_limit) {
        node.iteration_limit = true;
        return node;
    }
    if (result.status != lp::Status::optimal) return node;

    const std::size_t n = problem.length();
    node.feasible = true;
    node.bound = -result.objective;
    node.schedule.p_charge.resize(n);
    node.schedule.p_discharge.resize(n);
    node.schedule.soc.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        node.schedule.p_charge[t] = result.x[base.charge[t]];
        node.schedule.p_discharge[t] = result.x[base.discharge[t]];
        node.schedule.soc[t] = result.x[base.soc[t]];
    }
    node.schedule.objective = profit(node.schedule, problem.prices, par.dt_hours);
    return node;
}

// Step with the largest simultaneous charge/discharge above comp_tol, or npos.
std::size_t worst_overlap(const Schedule& s, double comp_tol) {
    std::size_t worst = static_cast<std::size_t>(-1);
    double worst_amount = comp_tol;
    for (std::size_t t = 0; t < s.length(); ++t) {
        const double overlap = std::min(s.p_charge[t], s.p_discharge[t]);
        if (overlap > worst_amount) {
            worst_amount = overlap;
            worst = t;
        }
    }
    return worst;
}

bool lex_less(const Schedule& a, const Schedule& b) {
    constexpr double kTol = 1e-9;
    for (const auto member : {&Schedule::p_charge, &Schedule::p_discharge}) {
        const auto& va = a.*member;
        const auto& vb = b.*member;
        for (std::size_t t = 0; t < va.size(); ++t) {
            if (std::abs(va[t] - vb[t]) > kTol) return va[t] < vb[t];
        }
    }
    return false;
}

double tie_tol(double objective) { return 1e-9 * std::max(1.0, std::abs(objective)); }

// Keeps the best leaf: higher objective, then lexicographically smaller
// action vector among ties.
class Incumbent {
public:
    void offer(Schedule candidate) {
        if (!best_ || candidate.objective > best_->objective + tie_tol(best_->objective) ||
            (std::abs(candidate.objective - best_->objective) <= tie_tol(best_->objective) &&
             lex_less(candidate, *best_))) {
            best_ = std::move(candidate);
        }
    }

    [[nodiscard]] bool dominates(double bound) const {
        return best_ && bound < best_->objective - tie_tol(best_->objective);
    }

    std::optional<Schedule>& best() { return best_; }

private:
    std::optional<Schedule> best_;
};

}  // namespace

void SolverOptions::validate() const {
    if (!(feas_tol > 0.0)) throw InvalidArgument("solver feas_tol must be > 0");
    if (!(comp_tol > 0.0)) throw InvalidArgument("solver comp_tol must be > 0");
    if (node_limit < 1) throw InvalidArgument("solver node_limit must be >= 1");
}

std::string_view to_string(SolveStatus status) noexcept {
    switch (status) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::NodeLimit: return "NodeLimit";
    }
    return "Unknown";
}

SolveOutcome solve(const ScheduleProblem& problem, const SolverOptions& options) {
    problem.validate();
    options.validate();

    auto base = build_lp(problem);
    const std::size_t n = problem.length();
    SolveOutcome outcome;

    if (options.relaxed_only) {
        auto node = solve_node(base, problem, std::vector<Restriction>(n, Restriction::none), options);
        outcome.nodes_explored = 1;
        if (node.iteration_limit) {
            outcome.status = SolveStatus::NodeLimit;
        } else if (node.feasible) {
            outcome.status = SolveStatus::Optimal;
            outcome.schedule = std::move(node.schedule);
        }
        return outcome;
    }

    Incumbent incumbent;
    std::vector<std::vector<Restriction>> stack;
    stack.emplace_back(n, Restriction::none);
    while (!stack.empty()) {
        if (outcome.nodes_explored >= options.node_limit) {
            outcome.status = SolveStatus::NodeLimit;
            return outcome;
        }
        auto restrict = std::move(stack.back());
        stack.pop_back();
        ++outcome.nodes_explored;

        auto node = solve_node(base, problem, restrict, options);
        if (node.iteration_limit) {
            outcome.status = SolveStatus::NodeLimit;
            return outcome;
        }
        if (!node.feasible || incumbent.dominates(node.bound)) continue;

        const std::size_t branch = worst_overlap(node.schedule, options.comp_tol);
        if (branch == static_cast<std::size_t>(-1)) {
            incumbent.offer(std::move(node.schedule));
            continue;
        }
        // LIFO: the charge-only child is explored first.
        auto discharge_child = restrict;
        discharge_child[branch] = Restriction::discharge_only;
        restrict[branch] = Restriction::charge_only;
        stack.push_back(std::move(discharge_child));
        stack.push_back(std::move(restrict));
    }

    if (incumbent.best()) {
        outcome.status = SolveStatus::Optimal;
        outcome.schedule = std::move(incumbent.best());
    } else {
        outcome.status = SolveStatus::Infeasible;
    }
    return outcome;
}

SolveOutcome oracle_enumerate(const ScheduleProblem& problem, const SolverOptions& options) {
    problem.validate();
    options.validate();
    const std::size_t n = problem.length();
    if (n > kOracleMaxSteps) {
        throw HorizonTooLong("oracle_enumerate supports at most " + std::to_string(kOracleMaxSteps) +
                             " steps, got " + std::to_string(n));
    }

    auto base = build_lp(problem);
    Incumbent incumbent;
    SolveOutcome outcome;
    std::vector<Restriction> restrict(n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        for (std::size_t t = 0; t < n; ++t) {
            restrict[t] = (mask >> t) & 1u ? Restriction::charge_only : Restriction::discharge_only;
        }
        ++outcome.nodes_explored;
        auto node = solve_node(base, problem, restrict, options);
        if (node.iteration_limit) {
            outcome.status = SolveStatus::NodeLimit;
            return outcome;
        }
        if (node.feasible) incumbent.offer(std::move(node.schedule));
    }
    if (incumbent.best()) {
        outcome.status = SolveStatus::Optimal;
        outcome.schedule = std::move(incumbent.best());
    }
    return outcome;
}

double oracle_grid_dp(const ScheduleProblem& problem, std::size_t soc_grid, std::size_t power_grid) {
    problem.validate();
    if (soc_grid < 51 || power_grid < 51) throw InvalidArgument("oracle_grid_dp grids must have >= 51 points");

    const auto& par = problem.params;
    const std::size_t n = problem.length();
    const double span = par.soc_max - par.soc_min;
    const double soc_step = span / static_cast<double>(soc_grid - 1);
    auto level = [&](std::size_t i) { return par.soc_min + soc_step * static_cast<double>(i); };
    constexpr double kSlack = 1e-12;
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    // Best reward-to-go from exact SoC `s` at step t, given value[] of t+1.
    auto best_from = [&](double s, std::size_t t, const std::vector<double>& next_value) {
        const double price = problem.prices[t];
        const double drift = par.rho * s;
        double best = kNegInf;
        auto try_target = [&](std::size_t j) {
            if (next_value[j] == kNegInf) return;
            const double energy = level(j) - drift;
            double pc = 0.0;
            double pd = 0.0;
            if (energy >= 0.0) {
                pc = energy / (par.dt_hours * par.eta_c);
                if (pc > par.p_charge_max + kSlack) return;
            } else {
                pd = -energy * par.eta_d / par.dt_hours;
                if (pd > par.p_discharge_max + kSlack) return;
            }
            best = std::max(best, par.dt_hours * price * (pd - pc) + next_value[j]);
        };
        auto try_landing = [&](double landing) {
            if (span <= 0.0) {
                try_target(0);
                return;
            }
            const double pos = (landing - par.soc_min) / soc_step;
            const double lo = std::clamp(std::floor(pos), 0.0, static_cast<double>(soc_grid - 1));
            const double hi = std::clamp(std::ceil(pos), 0.0, static_cast<double>(soc_grid - 1));
            try_target(static_cast<std::size_t>(lo));
            try_target(static_cast<std::size_t>(hi));
        };
        try_landing(drift);
        const double total_range = par.p_charge_max + par.p_discharge_max;
        for (std::size_t k = 0; k < power_grid; ++k) {
            const double net_charge =
                -par.p_discharge_max + total_range * static_cast<double>(k) / static_cast<double>(power_grid - 1);
            const double delta = net_charge >= 0.0 ? par.eta_c * net_charge : net_charge / par.eta_d;
            try_landing(drift + par.dt_hours * delta);
        }
        return best;
    };

    const std::size_t levels = span > 0.0 ? soc_grid : 1;
    std::vector<double> value(levels, 0.0);
    std::vector<double> prev(levels);
    for (std::size_t t = n; t-- > 1;) {
        for (std::size_t i = 0; i < levels; ++i) prev[i] = best_from(level(i), t, value);
        value.swap(prev);
    }
    return best_from(problem.initial_soc, 0, value);
}

}  // namespace horizon_probe
