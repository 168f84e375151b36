#include "actihmm/mstep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace actihmm {

namespace {

constexpr double kNegligibleWeight = 1e-300;
// How far inside the feasible region an interior critical point must land
// before the boundary solution is preferred.
constexpr double kBoundarySlack = 1e-12;

double rational_sum(std::span<const RationalTerm> terms, double u) {
    double s = 0.0;
    for (const auto& term : terms) s += term.weight / (u - term.pole);
    return s;
}

double rational_derivative(std::span<const RationalTerm> terms, double u) {
    double s = 0.0;
    for (const auto& term : terms) {
        const double d = u - term.pole;
        s -= term.weight / (d * d);
    }
    return s;
}

}  // namespace

double solve_inner(std::span<const RationalTerm> terms, double bracket_hi, double tol) {
    double max_pole = -1.0;
    double first_max_weight = 0.0;
    for (const auto& term : terms) {
        if (term.weight <= 0.0) continue;
        if (term.pole > max_pole) {
            max_pole = term.pole;
            first_max_weight = term.weight;
        }
    }
    if (max_pole < 0.0) throw std::invalid_argument("solve_inner needs a positive weight");

    // Single-term solution of the largest-pole term: a certified lower
    // bound, since dropping the other nonnegative terms only shrinks the sum.
    double lo = max_pole + first_max_weight;
    double hi = std::max(bracket_hi, lo);
    while (rational_sum(terms, hi) > 1.0) hi *= 2.0;

    const double width_goal =
        std::max(tol * hi, hi * 4.0 * std::numeric_limits<double>::epsilon());
    while (hi - lo > width_goal) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (rational_sum(terms, mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }

    // Newton polish on h(u) = sum w/(u - p) - 1, kept inside the bracket.
    double u = 0.5 * (lo + hi);
    double best_u = u;
    double best_res = std::abs(rational_sum(terms, u) - 1.0);
    for (int iter = 0; iter < 16 && best_res > 0.0; ++iter) {
        const double h = rational_sum(terms, u) - 1.0;
        const double dh = rational_derivative(terms, u);
        if (!(dh < 0.0)) break;
        double next = u - h / dh;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (h > 0.0)
            lo = u;
        else
            hi = u;
        u = next;
        const double res = std::abs(rational_sum(terms, u) - 1.0);
        if (res < best_res) {
            best_res = res;
            best_u = u;
        } else {
            break;
        }
    }
    return best_u;
}

TransitionSufficientStats TransitionSufficientStats::from_posterior(const PosteriorStats& post) {
    const std::size_t n = post.n_states, T = post.horizon;
    TransitionSufficientStats stats;
    stats.transition_mass = Matrix(n, n);
    stats.self_mass = Matrix(n, T - 1);
    stats.exit_mass = Matrix(n, T - 1);
    stats.total_exit_mass.assign(n, 0.0);

    for (std::size_t t = 0; t + 1 < T; ++t) {
        for (std::size_t j = 0; j < n; ++j) {
            double exits = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = post.xi_at(t, i, j);
                stats.transition_mass(i, j) += v;
                if (i != j) exits += v;
            }
            stats.self_mass(j, t) = post.xi_at(t, j, j);
            stats.exit_mass(j, t) = exits;
            stats.total_exit_mass[j] += exits;
        }
    }
    return stats;
}

TransitionSufficientStats TransitionSufficientStats::from_path(std::span<const int> z,
                                                               std::size_t n_states) {
    const std::size_t T = z.size();
    TransitionSufficientStats stats;
    stats.transition_mass = Matrix(n_states, n_states);
    stats.self_mass = Matrix(n_states, T - 1);
    stats.exit_mass = Matrix(n_states, T - 1);
    stats.total_exit_mass.assign(n_states, 0.0);

    for (std::size_t t = 0; t + 1 < T; ++t) {
        const auto j = static_cast<std::size_t>(z[t]) - 1;
        const auto i = static_cast<std::size_t>(z[t + 1]) - 1;
        stats.transition_mass(i, j) += 1.0;
        if (i == j) {
            stats.self_mass(j, t) = 1.0;
        } else {
            stats.exit_mass(j, t) = 1.0;
            stats.total_exit_mass[j] += 1.0;
        }
    }
    return stats;
}

EmissionSufficientStats EmissionSufficientStats::from_posterior(const PosteriorStats& post,
                                                                const EmissionSequence& y,
                                                                std::size_t n_symbols) {
    const std::size_t n = post.n_states, T = post.horizon;
    EmissionSufficientStats stats;
    stats.symbol_mass = Matrix(n_symbols, n);
    stats.zero_mass = Matrix(n, T);
    stats.nonzero_mass = Matrix(n, T);
    stats.total_nonzero_mass.assign(n, 0.0);

    for (std::size_t t = 0; t < T; ++t) {
        const int s = y.y[t];
        for (std::size_t j = 0; j < n; ++j) {
            const double g = post.gamma(t, j);
            if (s == 0) {
                stats.zero_mass(j, t) = g;
            } else {
                stats.symbol_mass(static_cast<std::size_t>(s) - 1, j) += g;
                stats.nonzero_mass(j, t) = g;
                stats.total_nonzero_mass[j] += g;
            }
        }
    }
    return stats;
}

EmissionSufficientStats EmissionSufficientStats::from_path(std::span<const int> z,
                                                           const EmissionSequence& y,
                                                           std::size_t n_states,
                                                           std::size_t n_symbols) {
    const std::size_t T = z.size();
    EmissionSufficientStats stats;
    stats.symbol_mass = Matrix(n_symbols, n_states);
    stats.zero_mass = Matrix(n_states, T);
    stats.nonzero_mass = Matrix(n_states, T);
    stats.total_nonzero_mass.assign(n_states, 0.0);

    for (std::size_t t = 0; t < T; ++t) {
        const auto j = static_cast<std::size_t>(z[t]) - 1;
        const int s = y.y[t];
        if (s == 0) {
            stats.zero_mass(j, t) = 1.0;
        } else {
            stats.symbol_mass(static_cast<std::size_t>(s) - 1, j) += 1.0;
            stats.nonzero_mass(j, t) = 1.0;
            stats.total_nonzero_mass[j] += 1.0;
        }
    }
    return stats;
}

std::vector<double> update_pi(const PosteriorStats& post) {
    std::vector<double> pi(post.n_states);
    double sum = 0.0;
    for (std::size_t j = 0; j < post.n_states; ++j) {
        pi[j] = post.gamma(0, j);
        sum += pi[j];
    }
    // gamma(1) sums to one exactly in reals; strip the rounding drift that
    // long recursions accumulate.
    for (double& p : pi) p /= sum;
    return pi;
}

namespace {

// Shared core of the two parameter updates.  `mass[k]` is the time-summed
// posterior mass of target k (destination state, or symbol), `self` the
// per-step stay/zero-emission series, `act` the activity series on the same
// domain.  Targets with allowed[k] == 0 are forced to zero.  Writes the new
// column into `out`.
//
// The total exit (non-zero emission) mass is re-summed here from the masked
// per-target masses, so the boundary solution saturates the constraint
// exactly instead of within the rounding gap of two different summation
// orders.
void update_column(std::span<const double> mass, std::span<const double> self,
                   std::span<const double> act, double act_star,
                   std::span<const std::uint8_t> allowed, std::span<const double> previous,
                   double root_tol, std::size_t state, std::span<double> out) {
    const std::size_t targets = mass.size();
    const std::size_t steps = self.size();

    bool any_mass = false;
    double total_mass = 0.0;
    for (std::size_t k = 0; k < targets; ++k)
        if (allowed[k] && mass[k] > 0.0) {
            any_mass = true;
            total_mass += mass[k];
        }

    if (!any_mass) {
        bool self_active = false;
        for (std::size_t t = 0; t < steps; ++t)
            if (self[t] != 0.0 && act[t] != 0.0) self_active = true;
        if (!self_active) {
            // The objective is constant in this column; keep the incumbent.
            std::copy(previous.begin(), previous.end(), out.begin());
        } else {
            std::fill(out.begin(), out.end(), 0.0);
        }
        return;
    }

    if (act_star <= 0.0)
        throw InconsistentStats(state + 1,
                                "posterior mass present for state " + std::to_string(state + 1) +
                                    " although its activity level is identically zero");

    std::fill(out.begin(), out.end(), 0.0);

    // Largest activity among steps with self mass, and the stationarity
    // equation's terms.
    double act_k_star = 0.0;
    bool have_self = false;
    std::vector<RationalTerm> terms;
    for (std::size_t t = 0; t < steps; ++t) {
        if (self[t] == 0.0) continue;
        have_self = true;
        act_k_star = std::max(act_k_star, act[t]);
        const double w = act[t] * self[t];
        if (w > kNegligibleWeight) terms.push_back({w, act[t] * total_mass});
    }

    bool interior = false;
    if (have_self && !terms.empty() && act_k_star > 0.0) {
        const double bracket_hi = 2.0 * static_cast<double>(steps) * act_k_star;
        const double u = solve_inner(terms, bracket_hi, root_tol);
        const double scale = 1.0 / u;
        if (scale * act_star * total_mass < 1.0 - kBoundarySlack) {
            interior = true;
            for (std::size_t k = 0; k < targets; ++k)
                if (allowed[k] && mass[k] > 0.0) out[k] = mass[k] * scale;
        }
    }
    if (!interior) {
        // Constraint saturates: rescaled Baum-Welch split along the boundary.
        const double denom = act_star * total_mass;
        for (std::size_t k = 0; k < targets; ++k)
            if (allowed[k] && mass[k] > 0.0) out[k] = mass[k] / denom;
    }
}

}  // namespace

std::vector<double> update_tau_column(const TransitionSufficientStats& stats, std::size_t j,
                                      std::span<const double> f_j, double f_star,
                                      const SupportMask* mask,
                                      std::span<const double> previous, double root_tol) {
    const std::size_t n = stats.transition_mass.rows();
    std::vector<double> mass(n), prev(previous.begin(), previous.end());
    std::vector<std::uint8_t> allowed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool ok = i != j && (mask == nullptr || mask->transition_allowed(i, j));
        allowed[i] = ok ? 1 : 0;
        mass[i] = ok ? stats.transition_mass(i, j) : 0.0;
        if (!ok) prev[i] = 0.0;  // masked entries stay zero even when kept
    }
    std::vector<double> out(n, 0.0);
    update_column(mass, stats.self_mass.row(j), f_j, f_star, allowed, prev, root_tol, j, out);
    out[j] = 0.0;
    return out;
}

std::vector<double> update_epsilon_column(const EmissionSufficientStats& stats, std::size_t j,
                                          std::span<const double> g_j, double g_star,
                                          const SupportMask* mask,
                                          std::span<const double> previous, double root_tol) {
    const std::size_t m = stats.symbol_mass.rows();
    std::vector<double> mass(m), prev(previous.begin(), previous.end());
    std::vector<std::uint8_t> allowed(m);
    for (std::size_t s = 0; s < m; ++s) {
        const bool ok = mask == nullptr || mask->emission_allowed(s, j);
        allowed[s] = ok ? 1 : 0;
        mass[s] = ok ? stats.symbol_mass(s, j) : 0.0;
        if (!ok) prev[s] = 0.0;
    }
    std::vector<double> out(m, 0.0);
    update_column(mass, stats.zero_mass.row(j), g_j, g_star, allowed, prev, root_tol, j, out);
    return out;
}

Matrix update_tau(const TransitionSufficientStats& stats, const ModelSpec& spec,
                  const SupportMask* mask, const Matrix& previous, double root_tol) {
    const std::size_t n = spec.n_states();
    const std::size_t T = spec.horizon();
    Matrix tau(n, n);
    std::vector<double> prev_col(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) prev_col[i] = previous(i, j);
        const auto f_full = spec.activity().f_row(j);
        const auto col = update_tau_column(stats, j, f_full.subspan(0, T - 1),
                                           spec.activity().f_star(j), mask, prev_col, root_tol);
        for (std::size_t i = 0; i < n; ++i) tau(i, j) = col[i];
    }
    return tau;
}

Matrix update_epsilon(const EmissionSufficientStats& stats, const ModelSpec& spec,
                      const SupportMask* mask, const Matrix& previous, double root_tol) {
    const std::size_t n = spec.n_states(), m = spec.n_symbols();
    Matrix eps(m, n);
    std::vector<double> prev_col(m);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t s = 0; s < m; ++s) prev_col[s] = previous(s, j);
        const auto col = update_epsilon_column(stats, j, spec.activity().g_row(j),
                                               spec.activity().g_star(j), mask, prev_col,
                                               root_tol);
        for (std::size_t s = 0; s < m; ++s) eps(s, j) = col[s];
    }
    return eps;
}

double expected_log_likelihood(const ModelSpec& spec, const ModelParams& params,
                               const PosteriorStats& post, const EmissionSequence& y) {
    const std::size_t n = spec.n_states(), T = spec.horizon();
    const double neg_inf = -std::numeric_limits<double>::infinity();

    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = post.gamma(0, j);
        if (w == 0.0) continue;
        if (params.pi[j] <= 0.0) return neg_inf;
        total += w * std::log(params.pi[j]);
    }

    std::vector<double> col(n);
    for (std::size_t t = 0; t + 1 < T; ++t) {
        for (std::size_t j = 0; j < n; ++j) {
            detail::transition_column(spec, params, t, j, col);
            for (std::size_t i = 0; i < n; ++i) {
                const double w = post.xi_at(t, i, j);
                if (w == 0.0) continue;
                if (col[i] <= 0.0) return neg_inf;
                total += w * std::log(col[i]);
            }
        }
    }

    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t j = 0; j < n; ++j) {
            const double w = post.gamma(t, j);
            if (w == 0.0) continue;
            const double b = detail::emission_prob(spec, params, t, j, y.y[t]);
            if (b <= 0.0) return neg_inf;
            total += w * std::log(b);
        }
    }
    return total;
}

}  // namespace actihmm
