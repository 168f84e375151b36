// Test-only reference implementations, kept independent of the library code
// paths they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "actihmm/inference.hpp"
#include "actihmm/model.hpp"
#include "actihmm/simulate.hpp"

namespace oracles {

using actihmm::EmissionSequence;
using actihmm::Matrix;
using actihmm::ModelParams;
using actihmm::ModelSpec;

struct Posterior {
    Matrix gamma;            // T x N
    std::vector<double> xi;  // (T-1) * N * N, [t][i][j]
    double log_likelihood = 0.0;
    double xi_at(std::size_t t, std::size_t i, std::size_t j, std::size_t n) const {
        return xi[(t * n + i) * n + j];
    }
};

// Exhaustive sum over all N^T state paths.  Only for tiny instances.
inline Posterior enumerate_posterior(const ModelSpec& spec, const ModelParams& params,
                                     const EmissionSequence& y) {
    const std::size_t n = spec.n_states(), T = spec.horizon();

    std::vector<Matrix> a(T - 1);
    for (std::size_t t = 0; t + 1 < T; ++t) a[t] = transition_matrix(spec, params, t);
    std::vector<std::vector<std::vector<double>>> b(T);
    for (std::size_t t = 0; t < T; ++t) {
        b[t].resize(n);
        for (std::size_t j = 0; j < n; ++j) b[t][j] = emission_distribution(spec, params, t, j);
    }

    Posterior post;
    post.gamma = Matrix(T, n);
    post.xi.assign((T - 1) * n * n, 0.0);
    double total = 0.0;

    std::vector<std::size_t> path(T, 0);
    while (true) {
        double p = params.pi[path[0]] * b[0][path[0]][static_cast<std::size_t>(y.y[0])];
        for (std::size_t t = 0; t + 1 < T; ++t)
            p *= a[t](path[t + 1], path[t]) * b[t + 1][path[t + 1]][static_cast<std::size_t>(y.y[t + 1])];
        total += p;
        for (std::size_t t = 0; t < T; ++t) post.gamma(t, path[t]) += p;
        for (std::size_t t = 0; t + 1 < T; ++t)
            post.xi[(t * n + path[t + 1]) * n + path[t]] += p;

        std::size_t k = 0;
        while (k < T && ++path[k] == n) path[k++] = 0;
        if (k == T) break;
    }

    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < n; ++j) post.gamma(t, j) /= total;
    for (double& v : post.xi) v /= total;
    post.log_likelihood = std::log(total);
    return post;
}

// Literal unscaled alpha/beta recursions with the diagonal emission matrix
// and its "1 where zero" pseudo-inverse.  Underflows on long sequences; used
// only for short ones.
inline Posterior unscaled_posterior(const ModelSpec& spec, const ModelParams& params,
                                    const EmissionSequence& y) {
    const std::size_t n = spec.n_states(), T = spec.horizon();

    std::vector<Matrix> a(T - 1);
    for (std::size_t t = 0; t + 1 < T; ++t) a[t] = transition_matrix(spec, params, t);
    Matrix bdiag(T, n);  // bdiag(t, j) = b_{y_t j}(t)
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t j = 0; j < n; ++j)
            bdiag(t, j) = emission_distribution(spec, params, t, j)[static_cast<std::size_t>(y.y[t])];
    }

    Matrix alpha(T, n), beta(T, n);
    for (std::size_t j = 0; j < n; ++j) alpha(0, j) = bdiag(0, j) * params.pi[j];
    for (std::size_t t = 1; t < T; ++t)
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += a[t - 1](i, j) * alpha(t - 1, j);
            alpha(t, i) = bdiag(t, i) * acc;
        }
    for (std::size_t j = 0; j < n; ++j) beta(T - 1, j) = bdiag(T - 1, j);
    for (std::size_t t = T - 1; t-- > 0;)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += beta(t + 1, i) * a[t](i, j);
            beta(t, j) = acc * bdiag(t, j);
        }

    Posterior post;
    post.gamma = Matrix(T, n);
    post.xi.assign((T - 1) * n * n, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        double denom = 0.0;
        std::vector<double> numer(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double binv = bdiag(t, j) != 0.0 ? 1.0 / bdiag(t, j) : 1.0;
            numer[j] = beta(t, j) * binv * alpha(t, j);
            denom += numer[j];
        }
        for (std::size_t j = 0; j < n; ++j) post.gamma(t, j) = numer[j] / denom;
    }
    for (std::size_t t = 0; t + 1 < T; ++t) {
        double denom = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) denom += beta(t + 1, i) * a[t](i, j) * alpha(t, j);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                post.xi[(t * n + i) * n + j] = beta(t + 1, i) * a[t](i, j) * alpha(t, j) / denom;
    }
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += alpha(T - 1, j);
    post.log_likelihood = std::log(total);
    return post;
}

// Plain stationary Baum-Welch over the alphabet {0..M}, column-stochastic
// transition matrix.  Written from the textbook recurrences, separate from
// the library's estimator.
struct StdHmm {
    std::vector<double> pi;
    Matrix a;  // N x N, a(i, j) = Pr(next = i | cur = j)
    Matrix b;  // (M+1) x N, b(s, j) = Pr(symbol = s | state = j)
};

inline void bw_iterate(StdHmm& hmm, const std::vector<int>& y) {
    const std::size_t n = hmm.pi.size(), T = y.size();

    Matrix alpha(T, n), beta(T, n);
    std::vector<double> scale(T, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        alpha(0, j) = hmm.pi[j] * hmm.b(static_cast<std::size_t>(y[0]), j);
        scale[0] += alpha(0, j);
    }
    for (std::size_t j = 0; j < n; ++j) alpha(0, j) /= scale[0];
    for (std::size_t t = 1; t < T; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += hmm.a(i, j) * alpha(t - 1, j);
            alpha(t, i) = hmm.b(static_cast<std::size_t>(y[t]), i) * acc;
            scale[t] += alpha(t, i);
        }
        for (std::size_t i = 0; i < n; ++i) alpha(t, i) /= scale[t];
    }
    for (std::size_t j = 0; j < n; ++j) beta(T - 1, j) = 1.0;
    for (std::size_t t = T - 1; t-- > 0;)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                acc += hmm.a(i, j) * hmm.b(static_cast<std::size_t>(y[t + 1]), i) * beta(t + 1, i);
            beta(t, j) = acc / scale[t + 1];
        }

    Matrix gamma(T, n);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < n; ++j) gamma(t, j) = alpha(t, j) * beta(t, j);

    Matrix xi_sum(n, n);
    for (std::size_t t = 0; t + 1 < T; ++t)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                xi_sum(i, j) += alpha(t, j) * hmm.a(i, j) *
                                hmm.b(static_cast<std::size_t>(y[t + 1]), i) * beta(t + 1, i) /
                                scale[t + 1];

    StdHmm next = hmm;
    for (std::size_t j = 0; j < n; ++j) next.pi[j] = gamma(0, j);
    for (std::size_t j = 0; j < n; ++j) {
        double gamma_sum = 0.0;
        for (std::size_t t = 0; t + 1 < T; ++t) gamma_sum += gamma(t, j);
        for (std::size_t i = 0; i < n; ++i)
            next.a(i, j) = gamma_sum > 0.0 ? xi_sum(i, j) / gamma_sum : hmm.a(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) {
        double gamma_sum = 0.0;
        for (std::size_t t = 0; t < T; ++t) gamma_sum += gamma(t, j);
        for (std::size_t s = 0; s < hmm.b.rows(); ++s) {
            double mass = 0.0;
            for (std::size_t t = 0; t < T; ++t)
                if (static_cast<std::size_t>(y[t]) == s) mass += gamma(t, j);
            next.b(s, j) = gamma_sum > 0.0 ? mass / gamma_sum : hmm.b(s, j);
        }
    }
    hmm = next;
}

// Deterministic feasible random instances.
struct Instance {
    ModelSpec spec;
    ModelParams params;
};

enum class ActivityKind { Random, Constant };

inline Instance random_instance(std::size_t n, std::size_t m, std::size_t T, std::uint64_t seed,
                                ActivityKind kind = ActivityKind::Random) {
    actihmm::SampleStream rng(seed, 0x7e57);

    Matrix f(n, T), g(n, T);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t t = 0; t < T; ++t) {
            f(j, t) = kind == ActivityKind::Constant ? 1.0 : rng.next();
            g(j, t) = kind == ActivityKind::Constant ? 1.0 : rng.next();
        }
    ModelSpec spec(n, m, T, actihmm::ActivityProfile(std::move(f), std::move(g)));

    ModelParams params;
    params.pi.resize(n);
    double pi_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        params.pi[j] = 0.05 + rng.next();
        pi_sum += params.pi[j];
    }
    for (double& p : params.pi) p /= pi_sum;

    params.tau = Matrix(n, n);
    params.epsilon = Matrix(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        while (true) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == j) continue;
                params.tau(i, j) = rng.next();
                sum += params.tau(i, j);
            }
            if (spec.activity().f_star(j) * sum <= 1.0) break;
        }
        while (true) {
            double sum = 0.0;
            for (std::size_t s = 0; s < m; ++s) {
                params.epsilon(s, j) = rng.next();
                sum += params.epsilon(s, j);
            }
            if (spec.activity().g_star(j) * sum <= 1.0) break;
        }
    }
    return {std::move(spec), std::move(params)};
}

}  // namespace oracles
