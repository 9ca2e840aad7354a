#include "horizon_probe/cli.hpp"
#include "horizon_probe/log.hpp"

#include <iostream>

int main(int argc, char** argv) {
    horizon_probe::init_logging_from_env();
    return horizon_probe::run_cli(argc, argv, std::cout, std::cerr);
}
