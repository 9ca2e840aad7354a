#include "horizon_probe/model.hpp"

#include "horizon_probe/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace horizon_probe {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("invalid storage parameters: ") + what);
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw LengthMismatch(std::string(what) + ": lengths " + std::to_string(a) + " and " + std::to_string(b) +
                             " differ");
    }
}

}  // namespace

void EssParams::validate() const {
    require(std::isfinite(p_charge_max) && p_charge_max > 0.0, "p_charge_max must be > 0");
    require(std::isfinite(p_discharge_max) && p_discharge_max > 0.0, "p_discharge_max must be > 0");
    require(eta_c > 0.0 && eta_c <= 1.0, "eta_c must be in (0, 1]");
    require(eta_d > 0.0 && eta_d <= 1.0, "eta_d must be in (0, 1]");
    require(rho > 0.0 && rho <= 1.0, "rho must be in (0, 1]");
    require(std::isfinite(soc_min) && soc_min >= 0.0, "soc_min must be >= 0");
    require(std::isfinite(soc_max) && soc_max >= soc_min, "soc_max must be >= soc_min");
    require(soc_init >= soc_min && soc_init <= soc_max, "soc_init must lie in [soc_min, soc_max]");
    require(std::isfinite(dt_hours) && dt_hours > 0.0, "dt_hours must be > 0");
}

EssParams reference_params() noexcept { return EssParams{}; }

void ScheduleProblem::validate(double tol) const {
    params.validate();
    if (prices.empty()) throw InvalidArgument("schedule problem needs at least one price");
    for (double p : prices) {
        if (!std::isfinite(p)) throw InvalidArgument("schedule problem has a non-finite price");
    }
    if (!(initial_soc >= params.soc_min - tol && initial_soc <= params.soc_max + tol)) {
        throw InvalidArgument("initial_soc " + std::to_string(initial_soc) + " outside [" +
                              std::to_string(params.soc_min) + ", " + std::to_string(params.soc_max) + "]");
    }
}

ScheduleProblem make_problem(const EssParams& params, std::span<const double> prices) {
    return make_problem(params, prices, params.soc_init);
}

ScheduleProblem make_problem(const EssParams& params, std::span<const double> prices, double initial_soc) {
    ScheduleProblem problem{params, std::vector<double>(prices.begin(), prices.end()), initial_soc};
    problem.validate();
    return problem;
}

std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::SocBelowMin: return "SocBelowMin";
        case ViolationKind::SocAboveMax: return "SocAboveMax";
        case ViolationKind::ChargeOverCap: return "ChargeOverCap";
        case ViolationKind::DischargeOverCap: return "DischargeOverCap";
        case ViolationKind::NegativePower: return "NegativePower";
        case ViolationKind::DynamicsMismatch: return "DynamicsMismatch";
        case ViolationKind::Simultaneity: return "Simultaneity";
    }
    return "Unknown";
}

double step_soc(double s_prev, double p_c, double p_d, const EssParams& params) noexcept {
    return params.rho * s_prev + params.dt_hours * (params.eta_c * p_c - p_d / params.eta_d);
}

double profit(std::span<const double> p_charge, std::span<const double> p_discharge, std::span<const double> prices,
              double dt_hours) {
    require_same_length(p_charge.size(), prices.size(), "profit");
    require_same_length(p_discharge.size(), prices.size(), "profit");
    double total = 0.0;
    for (std::size_t t = 0; t < prices.size(); ++t) {
        total += dt_hours * prices[t] * (p_discharge[t] - p_charge[t]);
    }
    return total;
}

double profit(const Schedule& schedule, std::span<const double> prices, double dt_hours) {
    return profit(schedule.p_charge, schedule.p_discharge, prices, dt_hours);
}

std::vector<double> cumulative_profit(const Schedule& schedule, std::span<const double> prices, double dt_hours) {
    require_same_length(schedule.p_charge.size(), prices.size(), "cumulative_profit");
    require_same_length(schedule.p_discharge.size(), prices.size(), "cumulative_profit");
    std::vector<double> cum(prices.size());
    double total = 0.0;
    for (std::size_t t = 0; t < prices.size(); ++t) {
        total += dt_hours * prices[t] * (schedule.p_discharge[t] - schedule.p_charge[t]);
        cum[t] = total;
    }
    return cum;
}

std::vector<Violation> validate_schedule(const Schedule& schedule, const ScheduleProblem& problem, double tol) {
    const std::size_t n = problem.length();
    require_same_length(schedule.p_charge.size(), n, "validate_schedule p_charge");
    require_same_length(schedule.p_discharge.size(), n, "validate_schedule p_discharge");
    require_same_length(schedule.soc.size(), n, "validate_schedule soc");

    const auto& par = problem.params;
    std::vector<Violation> out;
    auto flag = [&](ViolationKind kind, std::size_t t, double excess) {
        if (excess > tol) out.push_back({kind, t + 1, excess});
    };

    double prev = problem.initial_soc;
    for (std::size_t t = 0; t < n; ++t) {
        const double pc = schedule.p_charge[t];
        const double pd = schedule.p_discharge[t];
        const double s = schedule.soc[t];
        flag(ViolationKind::SocBelowMin, t, par.soc_min - s);
        flag(ViolationKind::SocAboveMax, t, s - par.soc_max);
        flag(ViolationKind::ChargeOverCap, t, pc - par.p_charge_max);
        flag(ViolationKind::DischargeOverCap, t, pd - par.p_discharge_max);
        flag(ViolationKind::NegativePower, t, -std::min(pc, pd));
        flag(ViolationKind::DynamicsMismatch, t, std::abs(s - step_soc(prev, pc, pd, par)));
        flag(ViolationKind::Simultaneity, t, std::min(pc, pd));
        prev = s;
    }
    return out;
}

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

void write_trajectory_csv(std::ostream& out, const Schedule& schedule, std::span<const double> prices,
                          double dt_hours) {
    const auto cum = cumulative_profit(schedule, prices, dt_hours);
    require_same_length(schedule.soc.size(), prices.size(), "write_trajectory_csv");
    out << kTrajectoryCsvHeader << '\n';
    for (std::size_t t = 0; t < prices.size(); ++t) {
        out << (t + 1) << ',' << format_double(prices[t]) << ',' << format_double(schedule.p_charge[t]) << ','
            << format_double(schedule.p_discharge[t]) << ',' << format_double(schedule.soc[t]) << ','
            << format_double(cum[t]) << '\n';
    }
}

TrajectoryRows read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryCsvHeader) {
        throw SchemaMismatch("trajectory CSV header mismatch");
    }
    TrajectoryRows rows;
    std::size_t expected_t = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string_view> parts;
        std::string_view rest(line);
        for (auto comma = rest.find(','); comma != std::string_view::npos; comma = rest.find(',')) {
            parts.push_back(rest.substr(0, comma));
            rest.remove_prefix(comma + 1);
        }
        parts.push_back(rest);
        if (parts.size() != 6) {
            throw SchemaMismatch("trajectory CSV row " + std::to_string(expected_t) + ": expected 6 fields");
        }
        double fields[6];
        for (std::size_t i = 0; i < 6; ++i) {
            const auto field = parts[i];
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), fields[i]);
            if (ec != std::errc{} || ptr != field.data() + field.size()) {
                throw SchemaMismatch("trajectory CSV row " + std::to_string(expected_t) + ": bad field '" +
                                     std::string(field) + "'");
            }
        }
        if (fields[0] != static_cast<double>(expected_t)) {
            throw SchemaMismatch("trajectory CSV: expected t=" + std::to_string(expected_t));
        }
        rows.prices.push_back(fields[1]);
        rows.schedule.p_charge.push_back(fields[2]);
        rows.schedule.p_discharge.push_back(fields[3]);
        rows.schedule.soc.push_back(fields[4]);
        rows.cum_profit.push_back(fields[5]);
        ++expected_t;
    }
    return rows;
}

}  // namespace horizon_probe
