#pragma once

#include <cstddef>
#include <vector>

#include "actihmm/model.hpp"
#include "actihmm/simulate.hpp"

namespace actihmm {

// Posterior quantities from one E-step.
//
// gamma(t, j)    = Pr(X_{t+1} = j+1 | y)   for grid index t in [0, T-1]
// xi_at(t, i, j) = Pr(X_{t+1} = j+1, X_{t+2} = i+1 | y) for t in [0, T-2];
//                  j is the source state at step t, i the destination at
//                  t+1 (destination-first, matching the transition matrix
//                  column convention).
struct PosteriorStats {
    std::size_t n_states = 0;
    std::size_t horizon = 0;
    Matrix gamma;            // (T x N)
    std::vector<double> xi;  // (T-1) * N * N, destination-major per step
    double log_likelihood = 0.0;

    double xi_at(std::size_t t, std::size_t i, std::size_t j) const {
        return xi[(t * n_states + i) * n_states + j];
    }
    double& xi_at(std::size_t t, std::size_t i, std::size_t j) {
        return xi[(t * n_states + i) * n_states + j];
    }
};

// Scaled forward-backward pass for the time-inhomogeneous model.  The
// recursions normalize each step, so sequences of length ~2e5 run without
// underflow; posteriors are unchanged by the scaling.  Throws
// ImpossibleObservation if y has probability zero under the parameters.
PosteriorStats forward_backward(const ModelSpec& spec, const ModelParams& params,
                                const EmissionSequence& y);

// log Pr(y; params) from the forward pass alone.
double log_likelihood(const ModelSpec& spec, const ModelParams& params,
                      const EmissionSequence& y);

}  // namespace actihmm
