#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "cli_config.hpp"
#include "cli_run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"confham: numerical laboratory for a conformal Hamiltonian family"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "execute one task from a JSON config");
    std::string config_path;
    std::string output_override;
    long long seed_override = -1;
    run_cmd->add_option("config", config_path, "path to the JSON config")->required();
    run_cmd->add_option("--output", output_override, "override the output directory");
    run_cmd->add_option("--seed", seed_override, "override the seed");

    CLI11_PARSE(app, argc, argv);

    try {
        confham::cli::RunConfig cfg = confham::cli::load_run_config(config_path);
        if (!output_override.empty()) cfg.output = output_override;
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        return confham::cli::run(cfg, std::cout, std::cerr);
    } catch (const confham::cli::ConfigError& err) {
        std::cerr << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
