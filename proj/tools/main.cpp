#include <CLI11.hpp>
#include <iostream>

#include "hamlock/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hamlock: homoclinic and multibump solutions of periodic "
                 "second-order discrete Hamiltonian systems"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    long seed = -1;
    long window = -1;
    bool quiet = false;

    for (const std::string& name :
         {"check-model", "one-bump", "multibump", "flow", "diagnose"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory for report.json and traces");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--window", window, "override the bounding window halfwidth");
        sub->add_flag("--quiet", quiet, "suppress console summary");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        hamlock::RunConfig cfg = hamlock::RunConfig::from_file(config_path);
        if (seed >= 0) cfg.seed = seed;
        if (window > 0) cfg.window = window;
        return hamlock::run_command(app.get_subcommands().front()->get_name(), cfg, out_dir,
                                    quiet);
    } catch (const hamlock::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
