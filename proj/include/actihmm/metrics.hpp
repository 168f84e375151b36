#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "actihmm/model.hpp"

namespace actihmm {

// sum_i p_i log(p_i / q_i), with 0 * log(0/q) = 0 and +inf when some
// p_i > 0 has q_i = 0.  p and q must have equal size and each sum to 1.
double relative_entropy(std::span<const double> p, std::span<const double> q);

// Mean relative entropy over two aligned sequences of distributions.
double averaged_relative_entropy(const std::vector<std::vector<double>>& p_seq,
                                 const std::vector<std::vector<double>>& q_seq);

// How per-time relative entropies combine across source states.
enum class StateAggregate { Sum, Mean };

// Averaged relative entropy between the time-varying transition (resp.
// emission) distributions built from `truth` and from `estimate`.  Per time
// step, each state's column distribution contributes one relative entropy;
// the aggregate over states is summed by default.  +inf propagates.
double error_tau(const ModelSpec& spec, const ModelParams& truth, const ModelParams& estimate,
                 StateAggregate aggregate = StateAggregate::Sum);
double error_epsilon(const ModelSpec& spec, const ModelParams& truth,
                     const ModelParams& estimate, StateAggregate aggregate = StateAggregate::Sum);

struct BaselineEstimate {
    double value = 0.0;
    std::size_t samples_used = 0;
    // Draws discarded because their error was +inf (absolute-continuity
    // failures); counted rather than propagated.
    std::size_t skipped_infinite = 0;
};

// Monte-Carlo expectation of error_tau(truth, random feasible parameters):
// each unmasked off-diagonal tau(i, j) is drawn i.i.d. uniform on [0, 1],
// redrawing state j's column until the feasibility constraint holds.
// Deterministic given seed; samples use derived per-sample streams.
BaselineEstimate baseline_tau(const ModelSpec& spec, const ModelParams& truth,
                              std::size_t n_samples, std::uint64_t seed,
                              const SupportMask* mask = nullptr,
                              StateAggregate aggregate = StateAggregate::Sum);
BaselineEstimate baseline_epsilon(const ModelSpec& spec, const ModelParams& truth,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const SupportMask* mask = nullptr,
                                  StateAggregate aggregate = StateAggregate::Sum);

namespace detail {

// Distinct activity values with multiplicities, per state.  The per-time
// relative entropy depends on the activity level only, so time averages
// reduce to weighted sums over these groups.
using ActivityGroups = std::vector<std::vector<std::pair<double, std::size_t>>>;

ActivityGroups group_transition_activity(const ModelSpec& spec);
ActivityGroups group_emission_activity(const ModelSpec& spec);

// Relative entropy between the two transition columns of state j at
// activity level phi.
double transition_re(double phi, std::span<const double> truth_col, double truth_sum,
                     std::span<const double> est_col, double est_sum, std::size_t j);
// Same for emission distributions over {0..M}.
double emission_re(double phi, std::span<const double> truth_col, double truth_sum,
                   std::span<const double> est_col, double est_sum);

}  // namespace detail

}  // namespace actihmm
