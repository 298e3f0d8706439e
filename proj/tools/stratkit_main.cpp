#include "stratkit/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int do_run(const std::string& config_path, const std::string& out_override,
           std::optional<std::uint64_t> seed_override) {
    stratkit::RunConfig config = stratkit::RunConfig::from_file(config_path);
    if (!out_override.empty()) config.out_dir = out_override;
    if (seed_override) config.seed = *seed_override;
    const auto outcome = stratkit::run(config);
    for (const auto& s : outcome.report.suites)
        std::cout << s.name << ": " << s.status << "\n";
    std::cout << "report: " << config.out_dir << "/report.json\n";
    return outcome.exit_code;
}

stratkit::RunConfig scenario_config(const std::string& name) {
    stratkit::ojson j;
    j["scenario"] = name;
    return stratkit::RunConfig::from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stratified control data and retraction toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, scenario_name;
    std::optional<std::uint64_t> seed;
    bool as_json = false, no_color = false;
    std::vector<std::string> suites;
    int samples = 200;

    auto* run_cmd = app.add_subcommand("run", "run the full pipeline from a config file");
    run_cmd->add_option("--config", config_path, "JSON config path")->required();
    run_cmd->add_option("--out", out_dir, "output directory override");
    run_cmd->add_option("--seed", seed, "seed override");

    auto* list_cmd = app.add_subcommand("list-scenarios", "list the built-in scenarios");
    list_cmd->add_flag("--json", as_json, "machine-readable output");
    list_cmd->add_flag("--no-color", no_color, "plain text output");

    auto* verify_cmd = app.add_subcommand("verify", "build and verify one scenario");
    verify_cmd->add_option("--scenario", scenario_name, "scenario name")->required();
    verify_cmd->add_option("--suite", suites, "suites to run (default: all)");
    verify_cmd->add_option("--out", out_dir, "output directory");
    verify_cmd->add_option("--seed", seed, "seed override");

    auto* retract_cmd = app.add_subcommand("retract", "run the retraction suite");
    retract_cmd->add_option("--scenario", scenario_name, "scenario name")->required();
    retract_cmd->add_option("--samples", samples, "neighbourhood sample count");
    retract_cmd->add_option("--out", out_dir, "output directory");
    retract_cmd->add_option("--seed", seed, "seed override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return do_run(config_path, out_dir, seed);
        if (list_cmd->parsed()) {
            std::cout << stratkit::scenario_table(as_json, !no_color);
            return 0;
        }
        if (verify_cmd->parsed()) {
            stratkit::RunConfig config = scenario_config(scenario_name);
            config.suites = suites.empty()
                                ? std::vector<std::string>{"structure", "tangential",
                                                           "commutative"}
                                : suites;
            if (!out_dir.empty()) config.out_dir = out_dir;
            if (seed) config.seed = *seed;
            const auto outcome = stratkit::run(config);
            for (const auto& s : outcome.report.suites)
                std::cout << s.name << ": " << s.status << "\n";
            return outcome.exit_code;
        }
        if (retract_cmd->parsed()) {
            stratkit::RunConfig config = scenario_config(scenario_name);
            config.suites = {"retraction"};
            config.retract_samples = samples;
            if (!out_dir.empty()) config.out_dir = out_dir;
            if (seed) config.seed = *seed;
            const auto outcome = stratkit::run(config);
            for (const auto& s : outcome.report.suites)
                std::cout << s.name << ": " << s.status << "\n";
            return outcome.exit_code;
        }
    } catch (const stratkit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const stratkit::BuildError& e) {
        std::cerr << "build error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
