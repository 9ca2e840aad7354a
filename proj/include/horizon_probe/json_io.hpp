#pragma once

#include "horizon_probe/model.hpp"
#include "horizon_probe/solver.hpp"

#include <json.hpp>

#include <string>

namespace horizon_probe {

// JSON forms of the parameter blocks shared by the solution sidecar and the
// experiment config. Readers reject unknown keys and wrong types, reporting
// the offending path (e.g. `config.ess.eta_c`) in a SchemaMismatch; keys
// that are absent keep the value already in `base`.

[[nodiscard]] nlohmann::json to_json(const EssParams& params);
[[nodiscard]] nlohmann::json to_json(const SolverOptions& options);

[[nodiscard]] EssParams params_from_json(const nlohmann::json& j, const std::string& path,
                                         EssParams base = reference_params());
[[nodiscard]] SolverOptions solver_options_from_json(const nlohmann::json& j, const std::string& path,
                                                     SolverOptions base = {});

}  // namespace horizon_probe
