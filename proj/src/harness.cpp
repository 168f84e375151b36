#include "actihmm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "actihmm/activity.hpp"
#include "actihmm/inference.hpp"
#include "actihmm/io.hpp"
#include "actihmm/simulate.hpp"

namespace actihmm {

namespace {

ActivitySelector selector_from_json(const nlohmann::json& j) {
    ActivitySelector sel;
    if (j.contains("file")) {
        sel.file = j.at("file").get<std::string>();
        return sel;
    }
    sel.name = j.at("name").get<std::string>();
    if (sel.name != "constant" && sel.name != "raised_cosine" && sel.name != "shifted_cosine")
        throw std::invalid_argument("unknown activity function: " + sel.name);
    if (j.contains("n")) sel.n = j.at("n").get<double>();
    return sel;
}

// Case label -> (f, g) selectors.
std::pair<ActivitySelector, ActivitySelector> case_selectors(char label) {
    const ActivitySelector one{"constant", 1.0, ""};
    const ActivitySelector r1{"raised_cosine", 1.0, ""};
    const ActivitySelector r2{"raised_cosine", 2.0, ""};
    const ActivitySelector cj{"shifted_cosine", 1.0, ""};
    switch (label) {
        case 'a': return {one, cj};
        case 'b': return {one, r1};
        case 'c': return {one, one};
        case 'd': return {r1, r1};
        case 'e': return {cj, cj};
        case 'f': return {r2, one};
        case 'g': return {r1, one};
        case 'h': return {cj, one};
        default: throw std::invalid_argument(std::string("unknown case label: ") + label);
    }
}

Matrix build_activity_rows(const ActivitySelector& sel, const ExperimentConfig& config,
                           std::size_t horizon) {
    Matrix rows(config.n_states, horizon);
    for (std::size_t j = 0; j < config.n_states; ++j) {
        std::vector<double> series;
        if (!sel.file.empty()) {
            series = read_activity_series(sel.file, horizon);
        } else if (sel.name == "constant") {
            series = sample_activity([](std::int64_t) { return 1.0; }, horizon);
        } else if (sel.name == "raised_cosine") {
            series = sample_activity(
                [&](std::int64_t t) { return activity_raised_cosine(sel.n, config.period, t); },
                horizon);
        } else {
            const auto label = static_cast<std::int64_t>(j) + 1;
            series = sample_activity(
                [&](std::int64_t t) {
                    return activity_shifted_cosine(label, config.period, t, config.shift_step);
                },
                horizon);
        }
        for (std::size_t t = 0; t < horizon; ++t) rows(j, t) = series[t];
    }
    return rows;
}

bool epsilon_is_diagonal(const ModelParams& params) {
    if (params.epsilon.rows() != params.epsilon.cols()) return false;
    for (std::size_t s = 0; s < params.epsilon.rows(); ++s)
        for (std::size_t j = 0; j < params.epsilon.cols(); ++j)
            if (s != j && params.epsilon(s, j) != 0.0) return false;
    return true;
}

std::uint64_t case_seed(const ExperimentConfig& config, char label) {
    return label == 0 ? config.seed : config.seed + static_cast<std::uint64_t>(label - 'a');
}

}  // namespace

ModelParams default_truth_params() {
    ModelParams params;
    params.pi = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    params.tau = Matrix(3, 3);
    params.tau(0, 1) = 0.298244;
    params.tau(0, 2) = 0.0621274;
    params.tau(1, 0) = 0.134788;
    params.tau(1, 2) = 0.3710750;
    params.tau(2, 0) = 0.383490;
    params.tau(2, 1) = 0.182008;
    params.epsilon = Matrix(3, 3);
    params.epsilon(0, 0) = 0.770347;
    params.epsilon(1, 1) = 0.579213;
    params.epsilon(2, 2) = 0.0821789;
    return params;
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
    ExperimentConfig config;
    config.echo = doc;

    if (doc.contains("n_states")) config.n_states = doc.at("n_states").get<std::size_t>();
    if (doc.contains("n_symbols")) config.n_symbols = doc.at("n_symbols").get<std::size_t>();
    if (doc.contains("weeks")) config.weeks = doc.at("weeks").get<std::size_t>();
    if (doc.contains("horizon")) config.horizon = doc.at("horizon").get<std::size_t>();
    if (doc.contains("period")) config.period = doc.at("period").get<std::int64_t>();
    if (doc.contains("shift_step")) config.shift_step = doc.at("shift_step").get<std::int64_t>();

    if (doc.contains("case")) {
        const auto s = doc.at("case").get<std::string>();
        if (s.size() != 1) throw std::invalid_argument("case must be a single letter a..h");
        config.case_label = s[0];
    }
    if (doc.contains("activity")) {
        const auto& act = doc.at("activity");
        config.f_selector = selector_from_json(act.at("f"));
        config.g_selector = selector_from_json(act.at("g"));
    }
    if (doc.contains("cases")) {
        config.experiment_cases.clear();
        for (const auto& c : doc.at("cases"))
            config.experiment_cases.push_back(c.get<std::string>().at(0));
    }

    if (doc.contains("truth")) {
        config.truth = params_from_json(doc.at("truth"));
    } else if (doc.contains("truth_file")) {
        config.truth = read_params(doc.at("truth_file").get<std::string>());
    }
    if (doc.contains("diagonal_emissions"))
        config.diagonal_emissions = doc.at("diagonal_emissions").get<bool>();

    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("fit")) {
        const auto& f = doc.at("fit");
        if (f.contains("max_iters")) config.fit.max_iters = f.at("max_iters").get<std::size_t>();
        if (f.contains("loglik_rel_tol"))
            config.fit.loglik_rel_tol = f.at("loglik_rel_tol").get<double>();
        if (f.contains("root_tol")) config.fit.root_tol = f.at("root_tol").get<double>();
        if (f.contains("record_history"))
            config.fit.record_history = f.at("record_history").get<bool>();
    }
    if (doc.contains("baseline_samples"))
        config.baseline_samples = doc.at("baseline_samples").get<std::size_t>();
    if (doc.contains("out_dir")) config.out_dir = doc.at("out_dir").get<std::string>();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    nlohmann::json doc;
    in >> doc;
    return config_from_json(doc);
}

std::size_t resolve_horizon(const ExperimentConfig& config) {
    if (config.horizon) return *config.horizon;
    return static_cast<std::size_t>(config.period) * 7 * config.weeks;
}

ModelSpec build_spec(const ExperimentConfig& config, char label) {
    ActivitySelector f_sel, g_sel;
    if (label != 0) {
        std::tie(f_sel, g_sel) = case_selectors(label);
    } else if (config.case_label) {
        std::tie(f_sel, g_sel) = case_selectors(*config.case_label);
    } else if (config.f_selector && config.g_selector) {
        f_sel = *config.f_selector;
        g_sel = *config.g_selector;
    } else {
        f_sel = g_sel = ActivitySelector{"constant", 1.0, ""};
    }

    const std::size_t horizon = resolve_horizon(config);
    ActivityProfile profile(build_activity_rows(f_sel, config, horizon),
                            build_activity_rows(g_sel, config, horizon));
    return ModelSpec(config.n_states, config.n_symbols, horizon, std::move(profile));
}

ModelParams resolve_truth(const ExperimentConfig& config) {
    if (config.truth) return *config.truth;
    if (config.n_states == 3 && config.n_symbols == 3) return default_truth_params();
    throw std::invalid_argument(
        "no truth parameters given and the built-in defaults need N == M == 3");
}

std::optional<SupportMask> resolve_mask(const ExperimentConfig& config, const ModelSpec& spec) {
    bool diagonal = false;
    if (config.diagonal_emissions) {
        diagonal = *config.diagonal_emissions;
    } else if (config.truth || (config.n_states == 3 && config.n_symbols == 3)) {
        diagonal = spec.n_states() == spec.n_symbols() &&
                   epsilon_is_diagonal(resolve_truth(config));
    }
    if (!diagonal) return std::nullopt;
    return SupportMask::diagonal_emissions(spec);
}

CaseRunResult run_case(const ExperimentConfig& config, char label) {
    const auto started = std::chrono::steady_clock::now();

    const ModelSpec spec = build_spec(config, label);
    const ModelParams truth = resolve_truth(config);
    const auto mask = resolve_mask(config, spec);
    const std::uint64_t seed = case_seed(config, label);

    const auto [path, seq] = simulate(spec, truth, seed);
    const ModelParams init = initialize_from_emissions(spec, seq);

    FitConfig fit_config = config.fit;
    fit_config.record_history = true;
    fit_config.loglik_rel_tol = 0.0;  // fixed iteration count for the study

    CaseRunResult result;
    result.label = label;
    result.fit = fit(spec, seq, init, fit_config, mask ? &*mask : nullptr);

    result.err_tau.reserve(result.fit.history.size());
    result.err_eps.reserve(result.fit.history.size());
    for (const auto& estimate : result.fit.history) {
        result.err_tau.push_back(error_tau(spec, truth, estimate));
        result.err_eps.push_back(error_epsilon(spec, truth, estimate));
    }

    result.baseline_tau = baseline_tau(spec, truth, config.baseline_samples, seed,
                                       mask ? &*mask : nullptr);
    result.baseline_eps = baseline_epsilon(spec, truth, config.baseline_samples, seed,
                                           mask ? &*mask : nullptr);
    result.total_millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    return result;
}

std::string errors_csv(const FitResult& fit, const std::vector<double>& err_tau,
                       const std::vector<double>& err_eps) {
    const bool with_errors = !err_tau.empty();
    std::ostringstream os;
    os << (with_errors ? "iteration,err_tau,err_eps,loglik" : "iteration,loglik") << '\n';
    for (std::size_t k = 0; k < fit.iterations_run; ++k) {
        os << k + 1 << ',';
        if (with_errors) os << format_double(err_tau[k]) << ',' << format_double(err_eps[k]) << ',';
        os << format_double(fit.loglik_trace[k + 1]) << '\n';
    }
    return os.str();
}

namespace {

nlohmann::json run_record_json(const ExperimentConfig& config, const CaseRunResult& result) {
    nlohmann::json iterations = nlohmann::json::array();
    for (std::size_t k = 0; k < result.fit.iterations_run; ++k) {
        nlohmann::json row{{"iteration", k + 1},
                           {"loglik", result.fit.loglik_trace[k + 1]},
                           {"millis", result.fit.iteration_millis[k]}};
        if (!result.err_tau.empty()) {
            row["err_tau"] = result.err_tau[k];
            row["err_eps"] = result.err_eps[k];
        }
        iterations.push_back(std::move(row));
    }
    nlohmann::json record{{"config", config.echo},
                          {"iterations", std::move(iterations)},
                          {"final_params", params_to_json(result.fit.params)},
                          {"converged", result.fit.converged},
                          {"iterations_run", result.fit.iterations_run},
                          {"initial_loglik", result.fit.loglik_trace.front()},
                          {"total_millis", result.total_millis}};
    if (result.label != 0) record["case"] = std::string(1, result.label);
    if (result.baseline_tau.samples_used > 0) {
        record["baselines"] = {{"tau", result.baseline_tau.value},
                               {"epsilon", result.baseline_eps.value},
                               {"samples", result.baseline_tau.samples_used},
                               {"skipped_infinite", result.baseline_tau.skipped_infinite +
                                                        result.baseline_eps.skipped_infinite}};
    }
    return record;
}

}  // namespace

int cmd_simulate(const ExperimentConfig& config) {
    const ModelSpec spec = build_spec(config);
    const ModelParams truth = resolve_truth(config);
    require_feasible(spec, truth);

    const auto [path, seq] = simulate(spec, truth, config.seed);

    std::filesystem::create_directories(config.out_dir);
    write_sequence(config.out_dir / "x.txt", path.x);
    write_sequence(config.out_dir / "y.txt", seq.y);

    std::vector<std::size_t> counts(spec.n_symbols() + 1, 0);
    for (int s : seq.y) ++counts[static_cast<std::size_t>(s)];
    std::cout << "simulated " << seq.y.size() << " steps (seed " << config.seed << ")\n";
    for (std::size_t s = 0; s < counts.size(); ++s)
        std::cout << "  symbol " << s << ": " << counts[s] << " ("
                  << 100.0 * static_cast<double>(counts[s]) / static_cast<double>(seq.y.size())
                  << "%)\n";
    std::cout << "wrote " << (config.out_dir / "x.txt").string() << ", "
              << (config.out_dir / "y.txt").string() << "\n";
    return 0;
}

int cmd_fit(const ExperimentConfig& config, const std::filesystem::path& y_file) {
    const ModelSpec spec = build_spec(config);
    EmissionSequence seq{read_sequence(y_file)};
    check_sequence(spec, seq);

    // Error columns appear only when the caller supplied the generating
    // parameters.
    const bool have_truth = config.truth.has_value();

    const ModelParams init = initialize_from_emissions(spec, seq);
    const std::optional<SupportMask> mask = resolve_mask(config, spec);

    FitConfig fit_config = config.fit;
    fit_config.record_history = true;

    CaseRunResult result;
    const auto started = std::chrono::steady_clock::now();
    result.fit = fit(spec, seq, init, fit_config, mask ? &*mask : nullptr);
    if (have_truth) {
        const ModelParams truth = resolve_truth(config);
        for (const auto& estimate : result.fit.history) {
            result.err_tau.push_back(error_tau(spec, truth, estimate));
            result.err_eps.push_back(error_epsilon(spec, truth, estimate));
        }
    }
    result.total_millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();

    std::filesystem::create_directories(config.out_dir);
    write_text_file(config.out_dir / "errors.csv",
                    errors_csv(result.fit, result.err_tau, result.err_eps));
    write_text_file(config.out_dir / "run.json",
                    run_record_json(config, result).dump(2) + "\n");

    std::cout << "fit: " << result.fit.iterations_run << " iterations, final loglik "
              << result.fit.loglik_trace.back()
              << (result.fit.converged ? " (converged)" : "") << "\n";
    if (have_truth)
        std::cout << "final err_tau " << result.err_tau.back() << ", err_eps "
                  << result.err_eps.back() << "\n";
    std::cout << "wrote " << (config.out_dir / "errors.csv").string() << ", "
              << (config.out_dir / "run.json").string() << "\n";
    return 0;
}

int cmd_baseline(const ExperimentConfig& config) {
    const ModelSpec spec = build_spec(config);
    const ModelParams truth = resolve_truth(config);
    const auto mask = resolve_mask(config, spec);

    const auto b_tau = baseline_tau(spec, truth, config.baseline_samples, config.seed,
                                    mask ? &*mask : nullptr);
    const auto b_eps = baseline_epsilon(spec, truth, config.baseline_samples, config.seed,
                                        mask ? &*mask : nullptr);

    nlohmann::json out{{"baseline_tau", b_tau.value},
                       {"baseline_epsilon", b_eps.value},
                       {"samples", config.baseline_samples},
                       {"skipped_infinite", b_tau.skipped_infinite + b_eps.skipped_infinite},
                       {"seed", config.seed}};
    std::filesystem::create_directories(config.out_dir);
    write_text_file(config.out_dir / "baselines.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_experiment(const ExperimentConfig& config) {
    std::filesystem::create_directories(config.out_dir);

    std::vector<std::future<CaseRunResult>> futures;
    futures.reserve(config.experiment_cases.size());
    for (char label : config.experiment_cases)
        futures.push_back(
            std::async(std::launch::async, [&config, label] { return run_case(config, label); }));

    nlohmann::json summary;
    summary["config"] = config.echo;
    nlohmann::json cases = nlohmann::json::object();

    std::vector<std::pair<char, double>> final_tau, final_eps;
    bool any_failed = false;

    for (std::size_t k = 0; k < futures.size(); ++k) {
        const char label = config.experiment_cases[k];
        try {
            const CaseRunResult result = futures[k].get();
            const auto case_dir = config.out_dir / (std::string("case_") + label);
            std::filesystem::create_directories(case_dir);
            write_text_file(case_dir / "errors.csv",
                            errors_csv(result.fit, result.err_tau, result.err_eps));
            write_text_file(case_dir / "run.json",
                            run_record_json(config, result).dump(2) + "\n");

            cases[std::string(1, label)] = {
                {"final_err_tau", result.err_tau.back()},
                {"final_err_eps", result.err_eps.back()},
                {"baseline_tau", result.baseline_tau.value},
                {"baseline_epsilon", result.baseline_eps.value},
                {"final_loglik", result.fit.loglik_trace.back()},
                {"iterations", result.fit.iterations_run},
                {"millis", result.total_millis}};
            final_tau.emplace_back(label, result.err_tau.back());
            final_eps.emplace_back(label, result.err_eps.back());
        } catch (const std::exception& e) {
            any_failed = true;
            cases[std::string(1, label)] = {{"error", e.what()}};
            std::cerr << "case " << label << " failed: " << e.what() << "\n";
        }
    }

    auto order_of = [](std::vector<std::pair<char, double>> v) {
        std::stable_sort(v.begin(), v.end(),
                         [](const auto& a, const auto& b) { return a.second < b.second; });
        std::string order;
        for (const auto& [label, value] : v) order.push_back(label);
        return order;
    };
    summary["cases"] = std::move(cases);
    summary["order_tau"] = order_of(final_tau);
    summary["order_epsilon"] = order_of(final_eps);

    write_text_file(config.out_dir / "summary.json", summary.dump(2) + "\n");

    std::cout << "case  err_tau      baseline_tau  err_eps      baseline_eps\n";
    for (const auto& [label, record] : summary["cases"].items()) {
        if (record.contains("error")) {
            std::cout << label << "     FAILED: " << record["error"].get<std::string>() << "\n";
            continue;
        }
        std::printf("%s     %-12.5g %-13.5g %-12.5g %-12.5g\n", label.c_str(),
                    record["final_err_tau"].get<double>(), record["baseline_tau"].get<double>(),
                    record["final_err_eps"].get<double>(),
                    record["baseline_epsilon"].get<double>());
    }
    std::cout << "final error order (tau): " << summary["order_tau"].get<std::string>() << "\n";
    std::cout << "final error order (eps): " << summary["order_epsilon"].get<std::string>()
              << "\n";
    std::cout << "wrote " << (config.out_dir / "summary.json").string() << "\n";
    return any_failed ? 1 : 0;
}

}  // namespace actihmm
