#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "actihmm/em.hpp"
#include "actihmm/metrics.hpp"
#include "actihmm/model.hpp"

namespace actihmm {

// One activity function, by name or from a file.
struct ActivitySelector {
    std::string name = "constant";  // constant | raised_cosine | shifted_cosine
    double n = 1.0;                 // raised_cosine parameter
    std::string file;               // overrides name when non-empty
};

// Resolved experiment configuration.  The activity pair (f, g) comes either
// from a case label or from explicit selectors.  Case labels map to
// (f, g) pairs: a=(1,c_j), b=(1,r1), c=(1,1), d=(r1,r1), e=(c_j,c_j),
// f=(r2,1), g=(r1,1), h=(c_j,1).
struct ExperimentConfig {
    std::size_t n_states = 3;
    std::size_t n_symbols = 3;
    std::size_t weeks = 200;             // horizon = period * 7 * weeks unless set
    std::optional<std::size_t> horizon;  // explicit override
    std::int64_t period = 24 * 6;        // one day at 10-minute steps
    std::int64_t shift_step = 6;         // shifted-cosine per-state offset

    std::optional<char> case_label;  // 'a'..'h'
    std::optional<ActivitySelector> f_selector;
    std::optional<ActivitySelector> g_selector;
    std::vector<char> experiment_cases = {'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h'};

    std::optional<ModelParams> truth;  // defaults to built-in demo values for N=M=3
    std::optional<bool> diagonal_emissions;

    std::uint64_t seed = 1;
    FitConfig fit;
    std::size_t baseline_samples = 1000;
    std::filesystem::path out_dir = "out";

    nlohmann::json echo;  // the resolved document, for run records
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

// Transition/emission parameters of the bundled three-state demo model
// (diagonal emissions).
ModelParams default_truth_params();

std::size_t resolve_horizon(const ExperimentConfig& config);

// Builds the spec for an explicit case label, or for the config's own
// selectors when label is 0.
ModelSpec build_spec(const ExperimentConfig& config, char label = 0);

// Truth parameters and the support mask implied by the config.
ModelParams resolve_truth(const ExperimentConfig& config);
std::optional<SupportMask> resolve_mask(const ExperimentConfig& config, const ModelSpec& spec);

struct CaseRunResult {
    char label = 0;
    FitResult fit;
    std::vector<double> err_tau;  // per iteration, when truth is known
    std::vector<double> err_eps;
    BaselineEstimate baseline_tau;
    BaselineEstimate baseline_eps;
    double total_millis = 0.0;
};

// simulate -> initialize -> fit -> per-iteration errors -> baselines, all
// with the config's per-case derived seed.
CaseRunResult run_case(const ExperimentConfig& config, char label);

// CSV with header "iteration,err_tau,err_eps,loglik" (error columns only
// when truth is known).
std::string errors_csv(const FitResult& fit, const std::vector<double>& err_tau,
                       const std::vector<double>& err_eps);

int cmd_simulate(const ExperimentConfig& config);
int cmd_fit(const ExperimentConfig& config, const std::filesystem::path& y_file);
int cmd_baseline(const ExperimentConfig& config);
int cmd_experiment(const ExperimentConfig& config);

}  // namespace actihmm
