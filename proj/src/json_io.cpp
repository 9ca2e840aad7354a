#include "horizon_probe/json_io.hpp"

#include "horizon_probe/errors.hpp"

#include <initializer_list>
#include <string_view>

namespace horizon_probe {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw SchemaMismatch(path + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto name : allowed) known = known || key == name;
        if (!known) throw SchemaMismatch(path + "." + key + ": unknown key");
    }
}

void read_number(const json& j, const std::string& path, const char* key, double& out) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_number()) throw SchemaMismatch(path + "." + key + ": expected a number");
    out = it->get<double>();
}

}  // namespace

json to_json(const EssParams& p) {
    return json{{"p_charge_max", p.p_charge_max}, {"p_discharge_max", p.p_discharge_max},
                {"eta_c", p.eta_c},               {"eta_d", p.eta_d},
                {"rho", p.rho},                   {"soc_min", p.soc_min},
                {"soc_max", p.soc_max},           {"soc_init", p.soc_init},
                {"dt_hours", p.dt_hours}};
}

json to_json(const SolverOptions& o) {
    return json{{"feas_tol", o.feas_tol},
                {"comp_tol", o.comp_tol},
                {"relaxed_only", o.relaxed_only},
                {"node_limit", o.node_limit},
                {"pivot_rule", std::string(lp::to_string(o.pivot_rule))}};
}

EssParams params_from_json(const json& j, const std::string& path, EssParams p) {
    require_object(j, path,
                   {"p_charge_max", "p_discharge_max", "eta_c", "eta_d", "rho", "soc_min", "soc_max", "soc_init",
                    "dt_hours"});
    read_number(j, path, "p_charge_max", p.p_charge_max);
    read_number(j, path, "p_discharge_max", p.p_discharge_max);
    read_number(j, path, "eta_c", p.eta_c);
    read_number(j, path, "eta_d", p.eta_d);
    read_number(j, path, "rho", p.rho);
    read_number(j, path, "soc_min", p.soc_min);
    read_number(j, path, "soc_max", p.soc_max);
    read_number(j, path, "soc_init", p.soc_init);
    read_number(j, path, "dt_hours", p.dt_hours);
    try {
        p.validate();
    } catch (const InvalidArgument& e) {
        throw SchemaMismatch(path + ": " + e.what());
    }
    return p;
}

SolverOptions solver_options_from_json(const json& j, const std::string& path, SolverOptions o) {
    require_object(j, path, {"feas_tol", "comp_tol", "relaxed_only", "node_limit", "pivot_rule"});
    read_number(j, path, "feas_tol", o.feas_tol);
    read_number(j, path, "comp_tol", o.comp_tol);
    if (const auto it = j.find("relaxed_only"); it != j.end()) {
        if (!it->is_boolean()) throw SchemaMismatch(path + ".relaxed_only: expected a boolean");
        o.relaxed_only = it->get<bool>();
    }
    if (const auto it = j.find("node_limit"); it != j.end()) {
        if (!it->is_number_unsigned()) throw SchemaMismatch(path + ".node_limit: expected a positive integer");
        o.node_limit = it->get<std::size_t>();
    }
    if (const auto it = j.find("pivot_rule"); it != j.end()) {
        if (!it->is_string()) throw SchemaMismatch(path + ".pivot_rule: expected a string");
        try {
            o.pivot_rule = lp::parse_pivot_rule(it->get<std::string>());
        } catch (const InvalidArgument& e) {
            throw SchemaMismatch(path + ".pivot_rule: " + e.what());
        }
    }
    try {
        o.validate();
    } catch (const InvalidArgument& e) {
        throw SchemaMismatch(path + ": " + e.what());
    }
    return o;
}

}  // namespace horizon_probe
