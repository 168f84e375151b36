#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "actihmm/errors.hpp"
#include "actihmm/harness.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> weeks;
    std::optional<std::size_t> iters;
    std::optional<std::size_t> samples;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON configuration file");
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--weeks", flags.weeks, "horizon in weeks of the configured period");
    cmd->add_option("--iters", flags.iters, "maximum EM iterations");
    cmd->add_option("--samples", flags.samples, "Monte-Carlo baseline sample count");
}

actihmm::ExperimentConfig resolve_config(const CommonFlags& flags) {
    actihmm::ExperimentConfig config = flags.config_path.empty()
                                           ? actihmm::config_from_json(nlohmann::json::object())
                                           : actihmm::load_config(flags.config_path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.out) config.out_dir = *flags.out;
    if (flags.weeks) {
        config.weeks = *flags.weeks;
        config.horizon.reset();
    }
    if (flags.iters) config.fit.max_iters = *flags.iters;
    if (flags.samples) config.baseline_samples = *flags.samples;
    return config;
}

const char* error_type(const std::exception& e) {
    if (dynamic_cast<const actihmm::ConstraintViolation*>(&e)) return "constraint_violation";
    if (dynamic_cast<const actihmm::ImpossibleObservation*>(&e)) return "impossible_observation";
    if (dynamic_cast<const actihmm::DimensionMismatch*>(&e)) return "dimension_mismatch";
    if (dynamic_cast<const actihmm::InconsistentStats*>(&e)) return "inconsistent_statistics";
    if (dynamic_cast<const actihmm::CannotInitialize*>(&e)) return "cannot_initialize";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_argument";
    return "error";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"activity-modulated hidden Markov models: simulation, estimation, evaluation"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string y_file;

    auto* sim = app.add_subcommand("simulate", "generate a state path and emission sequence");
    add_common(sim, flags);
    auto* fit = app.add_subcommand("fit", "estimate parameters from an emission sequence");
    add_common(fit, flags);
    fit->add_option("observations", y_file, "newline-delimited emission file")->required();
    auto* baseline = app.add_subcommand("baseline", "Monte-Carlo baseline errors");
    add_common(baseline, flags);
    auto* experiment =
        app.add_subcommand("experiment", "run the full simulation study across activity cases");
    add_common(experiment, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        const actihmm::ExperimentConfig config = resolve_config(flags);
        if (sim->parsed()) return actihmm::cmd_simulate(config);
        if (fit->parsed()) return actihmm::cmd_fit(config, y_file);
        if (baseline->parsed()) return actihmm::cmd_baseline(config);
        if (experiment->parsed()) return actihmm::cmd_experiment(config);
    } catch (const std::exception& e) {
        const nlohmann::json err{{"error", {{"type", error_type(e)}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 2;
}
