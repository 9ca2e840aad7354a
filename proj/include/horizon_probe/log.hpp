#pragma once

namespace horizon_probe {

/// Sets the spdlog level from HORIZON_PROBE_LOG (error, info or debug;
/// default error). Log output goes to stderr.
void init_logging_from_env();

}  // namespace horizon_probe
