#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "epicurv/cli.hpp"
#include "epicurv/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"epicurv: bounded epicyclic orbits in a radial magnetic field"};

    std::string config_path, output_path, format;
    int jobs = 0;
    unsigned long seed = 0;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--output", output_path, "override the configured output path");
    app.add_option("--format", format, "override the output format (csv|json)");
    app.add_option("--jobs", jobs, "worker count for sweep solves");
    app.add_option("--seed", seed, "seed for randomized test harnesses");

    CLI11_PARSE(app, argc, argv);

    try {
        epicurv::RunConfig cfg = epicurv::parse_config_file(config_path);
        if (!output_path.empty()) cfg.output_path = output_path;
        if (!format.empty()) cfg.format = format;
        if (jobs > 0) cfg.jobs = jobs;
        if (seed != 0) cfg.seed = seed;
        return epicurv::run(cfg);
    } catch (const epicurv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
