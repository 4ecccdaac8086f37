#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    int exit_code = 0;
    const auto cfg = volsel::cli::parse_args(argc, argv, exit_code);
    if (!cfg) return exit_code;
    const auto outcome = volsel::cli::run(*cfg);
    (outcome.exit_code == volsel::cli::kExitInputError ? std::cerr : std::cout) << outcome.output;
    return outcome.exit_code;
}
