#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "modlab/runner.hpp"

namespace {

using modlab::Json;

int run_experiment(const std::string& experiment, const std::string& configPath,
                   const std::string& outDir, long long seedOverride, double tolScale) {
    Json config;
    if (!configPath.empty()) {
        std::ifstream in(configPath);
        if (!in) {
            std::cerr << "error: cannot open config file " << configPath << "\n";
            return 2;
        }
        try {
            in >> config;
        } catch (const std::exception& e) {
            std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
            return 2;
        }
    } else {
        config = Json::object();
    }
    if (!config.contains("experiment"))
        config["experiment"] = experiment;
    if (seedOverride >= 0) config["seed"] = seedOverride;
    if (tolScale > 0) config["tolScale"] = tolScale;

    modlab::cli::ExperimentConfig cfg;
    try {
        cfg = modlab::cli::parse_config(config);
    } catch (const modlab::cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    if (cfg.experiment != experiment) {
        std::cerr << "usage error: config.experiment \"" << cfg.experiment
                  << "\" does not match subcommand \"" << experiment << "\"\n";
        return 2;
    }

    modlab::cli::RunOutcome outcome;
    try {
        outcome = modlab::cli::run(cfg, outDir);
    } catch (const modlab::cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    std::vector<std::string> failing;
    for (const Json& item : outcome.envelope["summary"]["criteria"]) {
        const bool pass = item["pass"].get<bool>();
        std::cout << (pass ? "PASS " : "FAIL ") << item["name"].get<std::string>() << "  value="
                  << item["value"].dump() << " threshold=" << item["threshold"].dump() << "\n";
        if (!pass) failing.push_back(item["name"].get<std::string>());
    }
    if (outDir.empty())
        std::cout << outcome.envelope.dump(2) << "\n";
    else
        std::cout << "report written to " << outDir << "/report.json\n";

    if (!failing.empty()) {
        std::cerr << "failing criteria:";
        for (const auto& name : failing) std::cerr << ' ' << name;
        std::cerr << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"modlab: numerical checks of the modular structure on truncated "
                 "Hilbert-Schmidt space, its Landau-level realization, and weight-family "
                 "generalizations"};
    app.require_subcommand(1);

    std::string configPath, outDir;
    long long seed = -1;
    double tolScale = -1.0;
    app.add_option("--config", configPath, "JSON experiment config")->capture_default_str();
    app.add_option("--out", outDir, "output directory for report.json and CSV exports");
    app.add_option("--seed", seed, "seed for the run's random ensembles");
    app.add_option("--tol-scale", tolScale, "scale factor applied to upper-bound thresholds");

    std::vector<CLI::App*> subs;
    for (const std::string& name : modlab::cli::experiment_names()) {
        subs.push_back(app.add_subcommand(name, "run the " + name + " suite"));
        subs.back()->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed())
            return run_experiment(modlab::cli::experiment_names()[i], configPath, outDir, seed,
                                  tolScale);
    std::cerr << "usage error: no subcommand given\n";
    return 2;
}
