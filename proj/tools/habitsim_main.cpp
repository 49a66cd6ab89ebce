#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "habitsim/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Two-sector habit-formation economy simulator: solves the saddle-path "
                 "equilibrium in closed form and stitches lockdown scenarios"};

    std::string config_path;
    std::string out_dir = "out";
    double dt = 0.0;
    double horizon = 0.0;
    bool list_scenarios = false;

    app.add_option("config", config_path, "path to the scenario config file")->required();
    app.add_option("-o,--out", out_dir, "output directory (default: out)");
    app.add_option("--dt", dt, "override the time grid step");
    app.add_option("--horizon", horizon, "override the per-segment horizon");
    app.add_flag("--list-scenarios", list_scenarios, "print the scenario list and exit");

    CLI11_PARSE(app, argc, argv);

    habitsim::ParsedConfig pc;
    try {
        pc = habitsim::load_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (dt > 0.0) pc.manifest.dt = dt;
    if (horizon > 0.0) pc.manifest.horizon = horizon;
    pc.manifest.out_dir = out_dir;

    if (list_scenarios) {
        for (const auto& name : pc.manifest.scenario_names()) std::cout << name << "\n";
        return 0;
    }

    const habitsim::RunArtifacts art = habitsim::run(pc);
    if (art.exit_code != 0) {
        std::cerr << (art.exit_code == 3 ? "scenario infeasible: " : "error: ")
                  << art.diagnostic << "\n";
        return art.exit_code;
    }
    std::cout << "wrote " << art.files_written.size() << " files; summary at "
              << art.summary_path << "\n";
    return 0;
}
