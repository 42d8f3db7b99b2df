// Command-line driver: every run is described by a JSON config; flags only
// override a handful of fields.
#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>

#include "rydspec/config.hpp"
#include "rydspec/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectra of random dipolar coupling matrices and their locator approximations"};
    std::string config_path;
    std::optional<std::string> command;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> realizations;
    std::optional<int> workers;
    std::optional<std::string> out;
    app.add_option("--config", config_path, "JSON run config")->required();
    app.add_option("--command", command,
                   "override the command: spectra|spacing|transition|locator|tabulate-analytic|compare|merge");
    app.add_option("--seed", seed, "override seed");
    app.add_option("--realizations", realizations, "override realization count");
    app.add_option("--workers", workers, "worker threads (0: all)");
    app.add_option("--out", out, "output directory");
    CLI11_PARSE(app, argc, argv);

    try {
        auto config = rydspec::load_config(config_path);
        if (command) config.command = rydspec::parse_command(*command);
        if (seed) config.seed = *seed;
        if (realizations) config.realizations = *realizations;
        if (workers) config.workers = *workers;
        if (out) config.output_dir = *out;
        config.validate();
        const auto summary = rydspec::run(config);
        std::cout << summary.text();
        return 0;
    } catch (const rydspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
