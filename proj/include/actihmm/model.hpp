#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actihmm/activity.hpp"
#include "actihmm/errors.hpp"
#include "actihmm/matrix.hpp"

namespace actihmm {

// Absolute tolerance on feasibility slacks and distribution sums.
inline constexpr double kFeasibilityTol = 1e-12;

// Dimensions of an activity-modulated HMM plus the activity levels that
// drive it.  Emission symbols live in {0, 1, ..., n_symbols}; 0 means "no
// emission".  States are labeled 1..n_states in files and messages.
//
// Index convention, used throughout: transition probabilities are
// column-stochastic, a(i, j) = Pr(X_{t+1} = i | X_t = j), i.e. column j is
// the distribution of the next state given current state j.  Likewise
// epsilon(s-1, j-1) parametrizes emission of symbol s from state j.
class ModelSpec {
public:
    ModelSpec(std::size_t n_states, std::size_t n_symbols, std::size_t horizon,
              ActivityProfile activity);

    std::size_t n_states() const { return n_states_; }
    std::size_t n_symbols() const { return n_symbols_; }
    std::size_t horizon() const { return horizon_; }
    const ActivityProfile& activity() const { return activity_; }

private:
    std::size_t n_states_;
    std::size_t n_symbols_;
    std::size_t horizon_;
    ActivityProfile activity_;
};

// pi: initial distribution over states (length N).
// tau: N x N nonnegative transition parameters, zero diagonal by storage
//      convention (the self-transition probability is the complement).
// epsilon: M x N nonnegative emission parameters; row s-1 is symbol s.
struct ModelParams {
    std::vector<double> pi;
    Matrix tau;
    Matrix epsilon;
};

// Structural zeros that estimation must preserve.  Diagonal transition
// entries are never allowed regardless of the mask.
class SupportMask {
public:
    SupportMask(std::size_t n_states, std::size_t n_symbols, bool allow_all = true);

    static SupportMask all(const ModelSpec& spec);
    // Emission s allowed only from state s (requires M == N).
    static SupportMask diagonal_emissions(const ModelSpec& spec);

    bool transition_allowed(std::size_t i, std::size_t j) const {
        return i != j && transitions_[i * n_states_ + j] != 0;
    }
    bool emission_allowed(std::size_t s, std::size_t j) const {
        return emissions_[s * n_states_ + j] != 0;
    }
    void set_transition(std::size_t i, std::size_t j, bool allowed) {
        transitions_[i * n_states_ + j] = allowed ? 1 : 0;
    }
    void set_emission(std::size_t s, std::size_t j, bool allowed) {
        emissions_[s * n_states_ + j] = allowed ? 1 : 0;
    }

    std::size_t n_states() const { return n_states_; }
    std::size_t n_symbols() const { return n_symbols_; }

private:
    std::size_t n_states_;
    std::size_t n_symbols_;
    std::vector<std::uint8_t> transitions_;  // [i * N + j]
    std::vector<std::uint8_t> emissions_;    // [s * N + j]
};

struct StateSlack {
    double transition;  // 1 - f_star(j) * sum_i tau(i, j)
    double emission;    // 1 - g_star(j) * sum_s epsilon(s, j)
};

struct FeasibilityReport {
    std::vector<StateSlack> slack;
    double pi_error = 0.0;  // |sum pi - 1|, or worst negativity if any pi < 0
    bool pi_ok = false;
    bool feasible = false;
    std::string describe() const;
};

// Per-state slacks of the feasible region; passes iff all slacks are
// >= -kFeasibilityTol and pi is a distribution.  Throws DimensionMismatch.
FeasibilityReport validate(const ModelSpec& spec, const ModelParams& params);

// Throws ConstraintViolation naming the first offending state.
void require_feasible(const ModelSpec& spec, const ModelParams& params);

// A(t): the column-stochastic transition matrix for the step t -> t+1,
// t a 0-based grid index in [0, horizon-2].
Matrix transition_matrix(const ModelSpec& spec, const ModelParams& params, std::size_t t);

// Distribution of the emission from state j (0-based) at grid index t, as a
// vector over symbols {0, 1, ..., M}.
std::vector<double> emission_distribution(const ModelSpec& spec, const ModelParams& params,
                                          std::size_t t, std::size_t j);

namespace detail {

// Unchecked fast paths; callers must have validated feasibility.
void transition_column(const ModelSpec& spec, const ModelParams& params, std::size_t t,
                       std::size_t j, std::span<double> out);
double emission_prob(const ModelSpec& spec, const ModelParams& params, std::size_t t,
                     std::size_t j, int symbol);

}  // namespace detail

}  // namespace actihmm
