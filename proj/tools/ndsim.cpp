#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ndsim/config.hpp"
#include "ndsim/presets.hpp"
#include "ndsim/validate.hpp"
#include "ndsim/version.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ndsim::ConfigError({"cannot open config file '" + path + "'"});
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    std::string format;
    std::string seed;
    int jobs = 1;

    // flag-level overrides go last so they beat both file and --set values
    std::vector<std::string> trailing() const {
        std::vector<std::string> v;
        if (!seed.empty()) {
            v.push_back("scenario.seed = " + seed);
            v.push_back("sim.seed = " + seed);
        }
        if (!out_dir.empty()) v.push_back("output.dir = " + out_dir);
        if (!format.empty()) v.push_back("output.format = " + format);
        return v;
    }

    ndsim::HarnessConfig load() const {
        ndsim::HarnessConfig cfg;
        if (!config_path.empty()) cfg = ndsim::parse_config_text(slurp(config_path));
        std::vector<std::string> overrides = sets;
        for (auto& o : trailing()) overrides.push_back(o);
        ndsim::apply_overrides(cfg, overrides);
        return cfg;
    }

    // preset runs rebuild their config internally, so hand everything over as
    // override lines in file -> --set -> flag order
    std::vector<std::string> as_overrides() const {
        std::vector<std::string> overrides;
        if (!config_path.empty())
            for (const auto& [k, v] : ndsim::parse_key_values(slurp(config_path)))
                overrides.push_back(k + " = " + v);
        for (const auto& s : sets) overrides.push_back(s);
        for (auto& o : trailing()) overrides.push_back(o);
        return overrides;
    }
};

void print_files(const std::vector<std::string>& files) {
    for (const auto& f : files) std::cout << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"directional neighbor discovery: analytical model and slot simulator"};
    app.set_version_flag("--version", std::string(ndsim::artifact_version));
    app.require_subcommand(1);
    app.fallthrough();  // accept the global flags after the subcommand name too

    CommonArgs args;
    app.add_option("--config", args.config_path, "config file with section.key = value lines");
    app.add_option("--set", args.sets, "inline override, e.g. --set sim.trials=10");
    app.add_option("--seed", args.seed, "override both scenario and simulation seeds");
    app.add_option("--out", args.out_dir, "output directory");
    app.add_option("--format", args.format, "output format: csv or json");
    app.add_option("--jobs", args.jobs, "worker threads for trial batches")
        ->check(CLI::Range(1, 256));

    auto* analyze = app.add_subcommand("analyze", "evaluate the analytical model only");
    auto* simulate = app.add_subcommand("simulate", "run the configured simulation");
    auto* sweep = app.add_subcommand("sweep", "simulate across a parameter grid");
    auto* preset = app.add_subcommand("preset", "reproduce a packaged experiment");
    std::string preset_name;
    preset->add_option("name", preset_name, "fig7|fig8|fig9|fig10|fig11|fig12|fig13|fig14")
        ->required();
    auto* validate = app.add_subcommand("validate", "run the self-check battery");
    std::string level = "fast";
    validate->add_option("level", level, "fast or full");
    auto* scenario = app.add_subcommand("scenario", "scenario utilities");
    auto* scenario_gen = scenario->add_subcommand("gen", "emit one generated scenario");
    scenario->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) {
            print_files(ndsim::run_analyze(args.load()));
        } else if (*simulate) {
            print_files(ndsim::run_simulate(args.load(), args.jobs));
        } else if (*sweep) {
            print_files(ndsim::run_sweep(args.load(), args.jobs));
        } else if (*preset) {
            print_files(ndsim::run_preset(preset_name, args.as_overrides(), args.jobs));
        } else if (*validate) {
            const auto rep = ndsim::run_validation(level);
            for (const auto& c : rep.checks)
                std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail
                          << "\n";
            if (!rep.all_passed()) return 1;
        } else if (*scenario_gen) {
            print_files(ndsim::run_scenario_gen(args.load()));
        }
    } catch (const ndsim::ConfigError& e) {
        std::cerr << "config error:\n" << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
