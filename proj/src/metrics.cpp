#include "actihmm/metrics.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "actihmm/simulate.hpp"

namespace actihmm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double relative_entropy(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw DimensionMismatch("relative entropy needs distributions of equal size");
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return kInf;
        total += p[i] * std::log(p[i] / q[i]);
    }
    return total;
}

double averaged_relative_entropy(const std::vector<std::vector<double>>& p_seq,
                                 const std::vector<std::vector<double>>& q_seq) {
    if (p_seq.size() != q_seq.size() || p_seq.empty())
        throw DimensionMismatch("averaged relative entropy needs equal non-empty sequences");
    double total = 0.0;
    for (std::size_t t = 0; t < p_seq.size(); ++t)
        total += relative_entropy(p_seq[t], q_seq[t]);
    return total / static_cast<double>(p_seq.size());
}

namespace detail {

namespace {

ActivityGroups group_rows(const ModelSpec& spec, bool transition) {
    const std::size_t n = spec.n_states();
    const std::size_t upto = transition ? spec.horizon() - 1 : spec.horizon();
    ActivityGroups groups(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::map<double, std::size_t> counts;
        for (std::size_t t = 0; t < upto; ++t) {
            const double v = transition ? spec.activity().f(j, t) : spec.activity().g(j, t);
            ++counts[v];
        }
        groups[j].assign(counts.begin(), counts.end());
    }
    return groups;
}

}  // namespace

ActivityGroups group_transition_activity(const ModelSpec& spec) {
    return group_rows(spec, true);
}

ActivityGroups group_emission_activity(const ModelSpec& spec) {
    return group_rows(spec, false);
}

double transition_re(double phi, std::span<const double> truth_col, double truth_sum,
                     std::span<const double> est_col, double est_sum, std::size_t j) {
    double total = 0.0;
    for (std::size_t i = 0; i < truth_col.size(); ++i) {
        const double p = (i == j) ? 1.0 - phi * truth_sum : phi * truth_col[i];
        if (p == 0.0) continue;
        const double q = (i == j) ? 1.0 - phi * est_sum : phi * est_col[i];
        if (q == 0.0) return kInf;
        total += p * std::log(p / q);
    }
    return total;
}

double emission_re(double phi, std::span<const double> truth_col, double truth_sum,
                   std::span<const double> est_col, double est_sum) {
    double total = 0.0;
    {
        const double p = 1.0 - phi * truth_sum;
        if (p != 0.0) {
            const double q = 1.0 - phi * est_sum;
            if (q == 0.0) return kInf;
            total += p * std::log(p / q);
        }
    }
    for (std::size_t s = 0; s < truth_col.size(); ++s) {
        const double p = phi * truth_col[s];
        if (p == 0.0) continue;
        const double q = phi * est_col[s];
        if (q == 0.0) return kInf;
        total += p * std::log(p / q);
    }
    return total;
}

}  // namespace detail

namespace {

struct Columns {
    std::vector<std::vector<double>> col;
    std::vector<double> sum;
};

Columns tau_columns(const Matrix& tau) {
    const std::size_t n = tau.cols();
    Columns c;
    c.col.assign(n, std::vector<double>(tau.rows()));
    c.sum.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < tau.rows(); ++i) {
            c.col[j][i] = tau(i, j);
            if (i != j) c.sum[j] += tau(i, j);
        }
    return c;
}

Columns eps_columns(const Matrix& eps) {
    const std::size_t n = eps.cols();
    Columns c;
    c.col.assign(n, std::vector<double>(eps.rows()));
    c.sum.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t s = 0; s < eps.rows(); ++s) {
            c.col[j][s] = eps(s, j);
            c.sum[j] += eps(s, j);
        }
    return c;
}

double aggregate_error(const ModelSpec& spec, const detail::ActivityGroups& groups,
                       const Columns& truth, const Columns& estimate, bool transition,
                       StateAggregate aggregate) {
    const std::size_t n = spec.n_states();
    const std::size_t steps = transition ? spec.horizon() - 1 : spec.horizon();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (const auto& [phi, count] : groups[j]) {
            const double re =
                transition
                    ? detail::transition_re(phi, truth.col[j], truth.sum[j], estimate.col[j],
                                            estimate.sum[j], j)
                    : detail::emission_re(phi, truth.col[j], truth.sum[j], estimate.col[j],
                                          estimate.sum[j]);
            if (std::isinf(re)) return kInf;
            acc += static_cast<double>(count) * re;
        }
        total += acc;
    }
    if (aggregate == StateAggregate::Mean) total /= static_cast<double>(n);
    return total / static_cast<double>(steps);
}

void check_params(const ModelSpec& spec, const ModelParams& p) {
    if (p.tau.rows() != spec.n_states() || p.tau.cols() != spec.n_states() ||
        p.epsilon.rows() != spec.n_symbols() || p.epsilon.cols() != spec.n_states())
        throw DimensionMismatch("parameter shapes do not match the model spec");
}

}  // namespace

double error_tau(const ModelSpec& spec, const ModelParams& truth, const ModelParams& estimate,
                 StateAggregate aggregate) {
    check_params(spec, truth);
    check_params(spec, estimate);
    const auto groups = detail::group_transition_activity(spec);
    return aggregate_error(spec, groups, tau_columns(truth.tau), tau_columns(estimate.tau), true,
                           aggregate);
}

double error_epsilon(const ModelSpec& spec, const ModelParams& truth, const ModelParams& estimate,
                     StateAggregate aggregate) {
    check_params(spec, truth);
    check_params(spec, estimate);
    const auto groups = detail::group_emission_activity(spec);
    return aggregate_error(spec, groups, eps_columns(truth.epsilon),
                           eps_columns(estimate.epsilon), false, aggregate);
}

namespace {

constexpr std::uint64_t kBaselineTauStream = 0x62617574ull;   // distinct stream tags
constexpr std::uint64_t kBaselineEpsStream = 0x62657073ull;

BaselineEstimate run_baseline(const ModelSpec& spec, const ModelParams& truth,
                              std::size_t n_samples, std::uint64_t seed, const SupportMask* mask,
                              StateAggregate aggregate, bool transition) {
    if (n_samples < 1) throw std::invalid_argument("baseline needs n_samples >= 1");
    check_params(spec, truth);

    const std::size_t n = spec.n_states();
    const std::size_t rows = transition ? spec.n_states() : spec.n_symbols();
    const auto groups = transition ? detail::group_transition_activity(spec)
                                   : detail::group_emission_activity(spec);
    const Columns truth_cols =
        transition ? tau_columns(truth.tau) : eps_columns(truth.epsilon);

    BaselineEstimate estimate;
    double acc = 0.0;
    Columns sample;
    sample.col.assign(n, std::vector<double>(rows));
    sample.sum.assign(n, 0.0);

    for (std::size_t idx = 0; idx < n_samples; ++idx) {
        SampleStream rng(seed, (transition ? kBaselineTauStream : kBaselineEpsStream) ^
                                   mix64(idx + 1));
        for (std::size_t j = 0; j < n; ++j) {
            const double star =
                transition ? spec.activity().f_star(j) : spec.activity().g_star(j);
            // Unmasked entries i.i.d. uniform, redrawn until feasible.
            while (true) {
                double sum = 0.0;
                for (std::size_t k = 0; k < rows; ++k) {
                    bool ok;
                    if (transition)
                        ok = k != j && (mask == nullptr || mask->transition_allowed(k, j));
                    else
                        ok = mask == nullptr || mask->emission_allowed(k, j);
                    sample.col[j][k] = ok ? rng.next() : 0.0;
                    if (!transition || k != j) sum += sample.col[j][k];
                }
                if (star * sum <= 1.0) {
                    sample.sum[j] = sum;
                    break;
                }
            }
        }

        double value = 0.0;
        {
            const std::size_t steps = transition ? spec.horizon() - 1 : spec.horizon();
            double total = 0.0;
            bool infinite = false;
            for (std::size_t j = 0; j < n && !infinite; ++j) {
                double state_acc = 0.0;
                for (const auto& [phi, count] : groups[j]) {
                    const double re =
                        transition
                            ? detail::transition_re(phi, truth_cols.col[j], truth_cols.sum[j],
                                                    sample.col[j], sample.sum[j], j)
                            : detail::emission_re(phi, truth_cols.col[j], truth_cols.sum[j],
                                                  sample.col[j], sample.sum[j]);
                    if (std::isinf(re)) {
                        infinite = true;
                        break;
                    }
                    state_acc += static_cast<double>(count) * re;
                }
                total += state_acc;
            }
            if (infinite) {
                ++estimate.skipped_infinite;
                continue;
            }
            if (aggregate == StateAggregate::Mean) total /= static_cast<double>(n);
            value = total / static_cast<double>(steps);
        }
        acc += value;
        ++estimate.samples_used;
    }

    estimate.value = estimate.samples_used > 0
                         ? acc / static_cast<double>(estimate.samples_used)
                         : kInf;
    return estimate;
}

}  // namespace

BaselineEstimate baseline_tau(const ModelSpec& spec, const ModelParams& truth,
                              std::size_t n_samples, std::uint64_t seed, const SupportMask* mask,
                              StateAggregate aggregate) {
    return run_baseline(spec, truth, n_samples, seed, mask, aggregate, true);
}

BaselineEstimate baseline_epsilon(const ModelSpec& spec, const ModelParams& truth,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const SupportMask* mask, StateAggregate aggregate) {
    return run_baseline(spec, truth, n_samples, seed, mask, aggregate, false);
}

}  // namespace actihmm
