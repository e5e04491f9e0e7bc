#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"

int main(int argc, char** argv) {
    using namespace lgset::cli;

    CLI::App app{"lgset: Laguerre-Gaussian joint spatial mode distributions and SET simulation"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(LGSET_VERSION));

    std::string config_path;
    std::string out_dir;
    std::string format;
    std::optional<std::uint64_t> seed;
    bool no_metadata = false;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json", "both"}));
    app.add_option("--seed", seed, "rng seed for simulate (overrides experiment.rng_seed)");
    app.add_flag("--no-metadata", no_metadata, "do not write the timestamped <command>.meta.json sidecar");

    for (const auto& name : command_names()) app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    RunConfig config;
    try {
        config = config_path.empty() ? default_run_config() : load_run_config(config_path);
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (!format.empty()) config.format = parse_output_format(format);
        if (seed) config.experiment.rng_seed = *seed;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    CommandOptions options;
    options.write_metadata = !no_metadata;
    return run_command(app.get_subcommands().front()->get_name(), config, options, std::cout, std::cerr);
}
