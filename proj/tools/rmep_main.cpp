#include <iostream>

#include "rmep/cli.hpp"

int main(int argc, char** argv) {
    try {
        auto cfg = rmep::cli::parse_args(argc, argv, std::cout);
        if (!cfg) return rmep::cli::exit_ok;
        return rmep::cli::run(*cfg, std::cerr);
    } catch (const rmep::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return rmep::cli::exit_config;
    }
}
