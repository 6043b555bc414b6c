// Scenario runner and verification CLI.
//
// Exit codes: 0 ok, 1 scenario error, 2 config error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "relwave/config.hpp"
#include "relwave/scenario.hpp"
#include "relwave/verify.hpp"
#include "relwave/version.hpp"

namespace {

struct ScenarioArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> trials;
    std::optional<unsigned> threads;
};

void add_scenario_command(CLI::App& app, const std::string& name, const std::string& description,
                          ScenarioArgs& args, int& exit_code) {
    CLI::App* cmd = app.add_subcommand(name, description);
    cmd->add_option("--config", args.config_path, "path to a key = value config file");
    cmd->add_option("--seed", args.seed, "master seed override");
    cmd->add_option("--out", args.out_dir, "output directory override");
    cmd->add_option("--trials", args.trials, "trial-count override");
    cmd->add_option("--threads", args.threads, "worker threads (outputs are thread-count independent)");
    cmd->callback([&args, name, &exit_code] {
        std::string text = "scenario = " + name + "\n";
        if (!args.config_path.empty()) {
            std::ifstream is(args.config_path);
            if (!is) {
                std::cerr << "config error: cannot read " << args.config_path << "\n";
                exit_code = 2;
                return;
            }
            std::ostringstream os;
            os << is.rdbuf();
            text = os.str();
        }
        try {
            relwave::RunConfig cfg = relwave::parse_config(text);
            if (cfg.scenario != relwave::parse_config("scenario = " + name).scenario) {
                std::cerr << "config error: config file is for scenario '"
                          << relwave::to_string(cfg.scenario) << "', subcommand is '" << name << "'\n";
                exit_code = 2;
                return;
            }
            if (args.seed) cfg.seed = *args.seed;
            if (args.out_dir) cfg.out_dir = *args.out_dir;
            if (args.trials) cfg.n_trials = *args.trials;
            if (args.threads) cfg.threads = *args.threads;
            relwave::validate_config(cfg);
            const relwave::RunResult res = relwave::run(cfg);
            std::cout << "wrote " << res.report_path.string() << "\n";
            exit_code = 0;
        } catch (const relwave::ConfigError& e) {
            std::cerr << e.what() << "\n";
            exit_code = 2;
        } catch (const std::exception& e) {
            std::cerr << "scenario error: " << e.what() << "\n";
            exit_code = 1;
        }
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("relwave ") + relwave::kVersion +
                 " -- relativistic wave-packet and measurement scenarios"};
    app.require_subcommand(1);

    int exit_code = 0;
    ScenarioArgs einstein, decay, epr, packet;
    add_scenario_command(app, "einstein_screen", "hemisphere-screen detection experiment", einstein, exit_code);
    add_scenario_command(app, "decay_90", "two-detector decay experiment at 90 degrees", decay, exit_code);
    add_scenario_command(app, "epr_boosted", "singlet pair experiment with a moving observer", epr, exit_code);
    add_scenario_command(app, "packet_boost_demo", "wave-packet boost comparison data", packet, exit_code);

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the full property/acceptance suite");
    verify_cmd->callback([&exit_code] {
        exit_code = relwave::verify::report(std::cout, relwave::verify::run_all());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // CLI misuse is a config error
    }
    return exit_code;
}
