#include "horizon_probe/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <string_view>

namespace horizon_probe {

void init_logging_from_env() {
    auto logger = spdlog::stderr_logger_mt("horizon_probe");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");

    const char* env = std::getenv("HORIZON_PROBE_LOG");
    const std::string_view level = env ? env : "error";
    if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else {
        spdlog::set_level(spdlog::level::err);
        if (level != "error") spdlog::error("unknown HORIZON_PROBE_LOG level '{}', using 'error'", level);
    }
}

}  // namespace horizon_probe
