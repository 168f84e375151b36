#include "actihmm/inference.hpp"

#include <cmath>
#include <string>

namespace actihmm {

namespace {

// Per-step emission probabilities b_{y_t j}(t) for all j, written into row t
// of `emit` (T x N).
void fill_emission_rows(const ModelSpec& spec, const ModelParams& params,
                        const EmissionSequence& y, Matrix& emit) {
    const std::size_t n = spec.n_states(), T = spec.horizon();
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < n; ++j)
            emit(t, j) = detail::emission_prob(spec, params, t, j, y.y[t]);
}

}  // namespace

PosteriorStats forward_backward(const ModelSpec& spec, const ModelParams& params,
                                const EmissionSequence& y) {
    require_feasible(spec, params);
    check_sequence(spec, y);

    const std::size_t n = spec.n_states(), T = spec.horizon();

    Matrix emit(T, n);
    fill_emission_rows(spec, params, y, emit);

    // Normalized forward pass: alpha(t, j) proportional to
    // Pr(y_1..y_t, X_t = j), each row scaled to sum 1; the scales c(t)
    // accumulate the log-likelihood.
    Matrix alpha(T, n);
    std::vector<double> scale(T);
    std::vector<double> col(n);
    double ll = 0.0;

    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        alpha(0, j) = emit(0, j) * params.pi[j];
        sum += alpha(0, j);
    }
    if (!(sum > 0.0))
        throw ImpossibleObservation(1, "observation at step 1 has probability zero");
    scale[0] = sum;
    for (std::size_t j = 0; j < n; ++j) alpha(0, j) /= sum;
    ll += std::log(sum);

    std::vector<double> propagated(n);
    for (std::size_t t = 1; t < T; ++t) {
        std::fill(propagated.begin(), propagated.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double aj = alpha(t - 1, j);
            if (aj == 0.0) continue;
            detail::transition_column(spec, params, t - 1, j, col);
            for (std::size_t i = 0; i < n; ++i) propagated[i] += col[i] * aj;
        }
        sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            alpha(t, i) = emit(t, i) * propagated[i];
            sum += alpha(t, i);
        }
        if (!(sum > 0.0))
            throw ImpossibleObservation(t + 1, "observation at step " + std::to_string(t + 1) +
                                                   " has probability zero");
        scale[t] = sum;
        for (std::size_t i = 0; i < n; ++i) alpha(t, i) /= sum;
        ll += std::log(sum);
    }

    // Backward pass with the forward scales; beta(t, j) is
    // Pr(y_{t+1}..y_T | X_t = j) divided by prod_{r>t} c(r), so that
    // gamma = alpha * beta directly.
    Matrix beta(T, n);
    for (std::size_t j = 0; j < n; ++j) beta(T - 1, j) = 1.0;
    std::vector<double> weighted(n);
    for (std::size_t t = T - 1; t-- > 0;) {
        for (std::size_t i = 0; i < n; ++i) weighted[i] = emit(t + 1, i) * beta(t + 1, i);
        for (std::size_t j = 0; j < n; ++j) {
            detail::transition_column(spec, params, t, j, col);
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += col[i] * weighted[i];
            beta(t, j) = acc / scale[t + 1];
        }
    }

    PosteriorStats post;
    post.n_states = n;
    post.horizon = T;
    post.log_likelihood = ll;
    post.gamma = Matrix(T, n);
    post.xi.assign((T - 1) * n * n, 0.0);

    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < n; ++j) post.gamma(t, j) = alpha(t, j) * beta(t, j);

    for (std::size_t t = 0; t + 1 < T; ++t) {
        for (std::size_t i = 0; i < n; ++i) weighted[i] = emit(t + 1, i) * beta(t + 1, i);
        for (std::size_t j = 0; j < n; ++j) {
            const double aj = alpha(t, j);
            if (aj == 0.0) continue;
            detail::transition_column(spec, params, t, j, col);
            for (std::size_t i = 0; i < n; ++i)
                post.xi_at(t, i, j) = aj * col[i] * weighted[i] / scale[t + 1];
        }
    }
    return post;
}

double log_likelihood(const ModelSpec& spec, const ModelParams& params,
                      const EmissionSequence& y) {
    require_feasible(spec, params);
    check_sequence(spec, y);

    const std::size_t n = spec.n_states(), T = spec.horizon();
    std::vector<double> alpha(n), next(n), col(n);

    double ll = 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        alpha[j] = detail::emission_prob(spec, params, 0, j, y.y[0]) * params.pi[j];
        sum += alpha[j];
    }
    if (!(sum > 0.0))
        throw ImpossibleObservation(1, "observation at step 1 has probability zero");
    for (std::size_t j = 0; j < n; ++j) alpha[j] /= sum;
    ll += std::log(sum);

    for (std::size_t t = 1; t < T; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (alpha[j] == 0.0) continue;
            detail::transition_column(spec, params, t - 1, j, col);
            for (std::size_t i = 0; i < n; ++i) next[i] += col[i] * alpha[j];
        }
        sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] *= detail::emission_prob(spec, params, t, i, y.y[t]);
            sum += next[i];
        }
        if (!(sum > 0.0))
            throw ImpossibleObservation(t + 1, "observation at step " + std::to_string(t + 1) +
                                                   " has probability zero");
        for (std::size_t i = 0; i < n; ++i) alpha[i] = next[i] / sum;
        ll += std::log(sum);
    }
    return ll;
}

}  // namespace actihmm
