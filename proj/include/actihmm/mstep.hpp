#pragma once

#include <span>
#include <vector>

#include "actihmm/inference.hpp"
#include "actihmm/model.hpp"

namespace actihmm {

// Time-summed posterior statistics feeding the constrained M-step.  All
// quantities are per source state j.
struct TransitionSufficientStats {
    Matrix transition_mass;               // N x N: sum_t xi(t, i, j)
    Matrix self_mass;                     // N x (T-1): xi(t, j, j)
    Matrix exit_mass;                     // N x (T-1): sum_{r != j} xi(t, r, j)
    std::vector<double> total_exit_mass;  // per state: sum_t exit_mass

    static TransitionSufficientStats from_posterior(const PosteriorStats& post);
    // Hard counts from a known path z (values 1..N), as used by the
    // initialization heuristic.
    static TransitionSufficientStats from_path(std::span<const int> z, std::size_t n_states);
};

struct EmissionSufficientStats {
    Matrix symbol_mass;                      // M x N: sum_t gamma(t, j) [y_t = s]
    Matrix zero_mass;                        // N x T: gamma(t, j) [y_t = 0]
    Matrix nonzero_mass;                     // N x T: gamma(t, j) [y_t != 0]
    std::vector<double> total_nonzero_mass;  // per state

    static EmissionSufficientStats from_posterior(const PosteriorStats& post,
                                                  const EmissionSequence& y,
                                                  std::size_t n_symbols);
    static EmissionSufficientStats from_path(std::span<const int> z, const EmissionSequence& y,
                                             std::size_t n_states, std::size_t n_symbols);
};

// One summand of the interior stationarity equation.
struct RationalTerm {
    double weight;  // >= 0
    double pole;    // >= 0
};

// Solves sum_t weight_t / (u - pole_t) = 1 for the unique root above the
// largest positive-weight pole.  The left side decreases monotonically from
// +inf (just above that pole) to 0, so the root exists and is unique.
//
// The initial bracket is [u_L, bracket_hi] where u_L solves the single-term
// equation for the first largest-pole term; bisection narrows it to relative
// width tol, and a safeguarded Newton polish finishes.  bracket_hi is grown
// if it does not yet straddle the root.  Requires at least one positive
// weight.
double solve_inner(std::span<const RationalTerm> terms, double bracket_hi, double tol);

// pi_hat = gamma(1), as in plain Baum-Welch.
std::vector<double> update_pi(const PosteriorStats& post);

// Maximizer of the expected log-likelihood over state j's transition
// parameter column, subject to f_star * sum_i tau(i, j) <= 1.  Cases:
//   - entries with zero transition mass (or masked) stay exactly zero;
//   - no self-loop mass at any active time: the constraint saturates and
//     the column is transition_mass / (f_star * total_exit_mass);
//   - otherwise the unique interior critical point comes from solve_inner,
//     split across destinations proportionally to transition_mass; if it
//     lands outside the feasible region the boundary solution above is
//     taken instead;
//   - no mass at all for state j: `previous` is kept (the objective is
//     constant in these coordinates).
// f_j has length T-1.  Throws InconsistentStats if f_star == 0 while
// transition mass is positive.
std::vector<double> update_tau_column(const TransitionSufficientStats& stats, std::size_t j,
                                      std::span<const double> f_j, double f_star,
                                      const SupportMask* mask,
                                      std::span<const double> previous, double root_tol);

// Mirror of update_tau_column for state j's emission parameters: symbol mass
// for transition mass, zero-emission mass for self-loop mass, g for f.
// g_j has length T.
std::vector<double> update_epsilon_column(const EmissionSufficientStats& stats, std::size_t j,
                                          std::span<const double> g_j, double g_star,
                                          const SupportMask* mask,
                                          std::span<const double> previous, double root_tol);

// Whole-matrix conveniences; column j of `previous` is the incumbent for the
// degenerate case.
Matrix update_tau(const TransitionSufficientStats& stats, const ModelSpec& spec,
                  const SupportMask* mask, const Matrix& previous, double root_tol);
Matrix update_epsilon(const EmissionSufficientStats& stats, const ModelSpec& spec,
                      const SupportMask* mask, const Matrix& previous, double root_tol);

// Expected complete-data log-likelihood of `params` under the posterior:
//   sum_j log(pi_j) gamma_j(1)
//   + sum_{i,j,t<T} log(a_ij(t)) xi_ij(t)
//   + sum_{j,t} log(b_{y_t,j}(t)) gamma_j(t)
// with 0 * log 0 = 0.  Returns -inf if a zero probability carries positive
// posterior weight.
double expected_log_likelihood(const ModelSpec& spec, const ModelParams& params,
                               const PosteriorStats& post, const EmissionSequence& y);

}  // namespace actihmm
