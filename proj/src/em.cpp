#include "actihmm/em.hpp"

#include <chrono>
#include <cmath>

#include "actihmm/mstep.hpp"

namespace actihmm {

ModelParams uniform_feasible_params(const ModelSpec& spec) {
    const std::size_t n = spec.n_states(), m = spec.n_symbols();
    ModelParams params;
    params.pi.assign(n, 1.0 / static_cast<double>(n));
    params.tau = Matrix(n, n);
    params.epsilon = Matrix(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double fs = spec.activity().f_star(j);
        if (n > 1 && fs > 0.0) {
            const double v = 1.0 / (2.0 * static_cast<double>(n - 1) * fs);
            for (std::size_t i = 0; i < n; ++i)
                if (i != j) params.tau(i, j) = v;
        }
        const double gs = spec.activity().g_star(j);
        if (gs > 0.0) {
            const double v = 1.0 / (2.0 * static_cast<double>(m) * gs);
            for (std::size_t s = 0; s < m; ++s) params.epsilon(s, j) = v;
        }
    }
    return params;
}

FitResult fit(const ModelSpec& spec, const EmissionSequence& y, const ModelParams& init,
              const FitConfig& config, const SupportMask* mask) {
    if (config.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    require_feasible(spec, init);
    check_sequence(spec, y);

    using clock = std::chrono::steady_clock;

    FitResult result;
    result.params = init;

    PosteriorStats post = forward_backward(spec, result.params, y);
    result.loglik_trace.push_back(post.log_likelihood);

    for (std::size_t k = 1; k <= config.max_iters; ++k) {
        const auto started = clock::now();

        const auto tstats = TransitionSufficientStats::from_posterior(post);
        const auto estats =
            EmissionSufficientStats::from_posterior(post, y, spec.n_symbols());

        ModelParams next;
        next.pi = update_pi(post);
        next.tau = update_tau(tstats, spec, mask, result.params.tau, config.root_tol);
        next.epsilon = update_epsilon(estats, spec, mask, result.params.epsilon, config.root_tol);
        result.params = std::move(next);

        post = forward_backward(spec, result.params, y);
        result.loglik_trace.push_back(post.log_likelihood);
        if (config.record_history) result.history.push_back(result.params);
        result.iteration_millis.push_back(
            std::chrono::duration<double, std::milli>(clock::now() - started).count());
        result.iterations_run = k;

        const double prev = result.loglik_trace[k - 1];
        const double gain = result.loglik_trace[k] - prev;
        if (config.loglik_rel_tol > 0.0 && gain < config.loglik_rel_tol * std::abs(prev)) {
            result.converged = true;
            break;
        }
    }
    return result;
}

std::vector<int> interpolate_states(const ModelSpec& spec, const EmissionSequence& y) {
    check_sequence(spec, y);
    const std::size_t T = spec.horizon();

    std::vector<std::size_t> marks;
    for (std::size_t t = 0; t < T; ++t)
        if (y.y[t] != 0) marks.push_back(t);
    if (marks.empty())
        throw CannotInitialize("cannot interpolate states: every emission is zero");

    std::vector<int> z(T, 0);
    for (std::size_t t = 0; t <= marks.front(); ++t) z[t] = y.y[marks.front()];
    for (std::size_t t = marks.back(); t < T; ++t) z[t] = y.y[marks.back()];

    for (std::size_t k = 0; k + 1 < marks.size(); ++k) {
        const std::size_t a = marks[k], b = marks[k + 1];
        z[a] = y.y[a];
        z[b] = y.y[b];
        if (b - a <= 1) continue;

        // Zero run (a, b): state y_a up to and including the step where f
        // first peaks within the run, state y_b afterwards.
        const auto j = static_cast<std::size_t>(y.y[a]) - 1;
        std::size_t peak = a + 1;
        for (std::size_t t = a + 2; t < b; ++t)
            if (spec.activity().f(j, t) > spec.activity().f(j, peak)) peak = t;
        for (std::size_t t = a + 1; t <= peak; ++t) z[t] = y.y[a];
        for (std::size_t t = peak + 1; t < b; ++t) z[t] = y.y[b];
    }
    return z;
}

ModelParams initialize_from_emissions(const ModelSpec& spec, const EmissionSequence& y) {
    if (spec.n_symbols() != spec.n_states())
        throw std::invalid_argument(
            "emission-based initialization requires a state-revealing alphabet (M == N)");

    const std::vector<int> z = interpolate_states(spec, y);
    const std::size_t n = spec.n_states(), T = spec.horizon();

    ModelParams params;
    params.pi.assign(n, 0.0);
    for (int v : z) params.pi[static_cast<std::size_t>(v) - 1] += 1.0;
    for (double& p : params.pi) p /= static_cast<double>(T);

    const auto tstats = TransitionSufficientStats::from_path(z, n);
    const auto estats = EmissionSufficientStats::from_path(z, y, n, spec.n_symbols());

    // States absent from z carry no counts; the fallback values stand in as
    // the incumbent there.
    const ModelParams fallback = uniform_feasible_params(spec);
    params.tau = update_tau(tstats, spec, nullptr, fallback.tau, 1e-12);
    params.epsilon = update_epsilon(estats, spec, nullptr, fallback.epsilon, 1e-12);
    return params;
}

}  // namespace actihmm
