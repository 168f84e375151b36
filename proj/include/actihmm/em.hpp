#pragma once

#include <cstddef>
#include <vector>

#include "actihmm/inference.hpp"
#include "actihmm/model.hpp"
#include "actihmm/simulate.hpp"

namespace actihmm {

struct FitConfig {
    std::size_t max_iters = 50;
    // Stop once (loglik_k - loglik_{k-1}) < loglik_rel_tol * |loglik_{k-1}|.
    // A non-positive value disables early stopping (fixed iteration count).
    double loglik_rel_tol = 1e-9;
    double root_tol = 1e-12;
    bool record_history = false;
};

struct FitResult {
    ModelParams params;
    // loglik_trace[k] = log Pr(y) under the estimate after k iterations;
    // entry 0 is the initial estimate.  Non-decreasing up to rounding.
    std::vector<double> loglik_trace;
    // Estimate after each iteration, when record_history is set.
    std::vector<ModelParams> history;
    std::vector<double> iteration_millis;
    std::size_t iterations_run = 0;
    bool converged = false;
};

// Alternates the E-step (forward_backward) with the constrained M-step
// updates until convergence or max_iters.  Every iterate is feasible.
FitResult fit(const ModelSpec& spec, const EmissionSequence& y, const ModelParams& init,
              const FitConfig& config, const SupportMask* mask = nullptr);

// Feasible fallback parameters: uniform pi, tau(i, j) = 1/(2 (N-1) f_star_j),
// epsilon(s, j) = 1/(2 M g_star_j); zero where the activity maximum is zero.
ModelParams uniform_feasible_params(const ModelSpec& spec);

// Fills the gaps of y with states (values 1..N), for the model where a
// non-zero emission names its state.  Each zero run between emissions j
// and i is split in two: state j up to and including the step where f_j
// first peaks within the run, state i afterwards.  Leading and trailing
// runs take the nearest non-zero emission.  Throws CannotInitialize on an
// all-zero sequence.
std::vector<int> interpolate_states(const ModelSpec& spec, const EmissionSequence& y);

// Initial estimate from the interpolated path: pi from state frequencies,
// tau and epsilon by one constrained M-step on the hard-count statistics.
// Requires n_symbols == n_states.
ModelParams initialize_from_emissions(const ModelSpec& spec, const EmissionSequence& y);

}  // namespace actihmm
