#include "actihmm/model.hpp"

#include <cmath>
#include <sstream>

namespace actihmm {

ModelSpec::ModelSpec(std::size_t n_states, std::size_t n_symbols, std::size_t horizon,
                     ActivityProfile activity)
    : n_states_(n_states), n_symbols_(n_symbols), horizon_(horizon),
      activity_(std::move(activity)) {
    if (n_states_ < 1 || n_symbols_ < 1 || horizon_ < 2)
        throw DimensionMismatch("model spec requires N >= 1, M >= 1, T >= 2");
    if (activity_.n_states() != n_states_ || activity_.horizon() != horizon_)
        throw DimensionMismatch("activity profile shape does not match N and T");
}

SupportMask::SupportMask(std::size_t n_states, std::size_t n_symbols, bool allow_all)
    : n_states_(n_states), n_symbols_(n_symbols),
      transitions_(n_states * n_states, allow_all ? 1 : 0),
      emissions_(n_symbols * n_states, allow_all ? 1 : 0) {}

SupportMask SupportMask::all(const ModelSpec& spec) {
    return SupportMask(spec.n_states(), spec.n_symbols(), true);
}

SupportMask SupportMask::diagonal_emissions(const ModelSpec& spec) {
    if (spec.n_symbols() != spec.n_states())
        throw DimensionMismatch("diagonal emissions require M == N");
    SupportMask mask(spec.n_states(), spec.n_symbols(), true);
    for (std::size_t s = 0; s < spec.n_symbols(); ++s)
        for (std::size_t j = 0; j < spec.n_states(); ++j)
            mask.set_emission(s, j, s == j);
    return mask;
}

std::string FeasibilityReport::describe() const {
    std::ostringstream os;
    os << (feasible ? "feasible" : "infeasible");
    for (std::size_t j = 0; j < slack.size(); ++j)
        os << "; state " << j + 1 << ": transition slack " << slack[j].transition
           << ", emission slack " << slack[j].emission;
    if (!pi_ok) os << "; initial distribution error " << pi_error;
    return os.str();
}

FeasibilityReport validate(const ModelSpec& spec, const ModelParams& params) {
    const std::size_t n = spec.n_states(), m = spec.n_symbols();
    if (params.pi.size() != n || params.tau.rows() != n || params.tau.cols() != n ||
        params.epsilon.rows() != m || params.epsilon.cols() != n)
        throw DimensionMismatch("parameter shapes do not match the model spec");

    FeasibilityReport report;
    report.slack.resize(n);
    bool ok = true;

    double pi_sum = 0.0;
    double worst_neg = 0.0;
    for (double p : params.pi) {
        pi_sum += p;
        if (p < 0.0) worst_neg = std::min(worst_neg, p);
    }
    report.pi_error = std::max(std::abs(pi_sum - 1.0), -worst_neg);
    report.pi_ok = report.pi_error <= kFeasibilityTol;
    ok = ok && report.pi_ok;

    for (std::size_t j = 0; j < n; ++j) {
        double tau_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            if (params.tau(i, j) < 0.0) ok = false;
            tau_sum += params.tau(i, j);
        }
        if (params.tau(j, j) != 0.0) ok = false;  // structural zero
        double eps_sum = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
            if (params.epsilon(s, j) < 0.0) ok = false;
            eps_sum += params.epsilon(s, j);
        }
        report.slack[j].transition = 1.0 - spec.activity().f_star(j) * tau_sum;
        report.slack[j].emission = 1.0 - spec.activity().g_star(j) * eps_sum;
        if (report.slack[j].transition < -kFeasibilityTol) ok = false;
        if (report.slack[j].emission < -kFeasibilityTol) ok = false;
    }
    report.feasible = ok;
    return report;
}

void require_feasible(const ModelSpec& spec, const ModelParams& params) {
    const FeasibilityReport report = validate(spec, params);
    if (report.feasible) return;
    if (!report.pi_ok)
        throw ConstraintViolation(0, "initial distribution is not a probability vector (error " +
                                         std::to_string(report.pi_error) + ")");
    for (std::size_t j = 0; j < report.slack.size(); ++j) {
        if (report.slack[j].transition < -kFeasibilityTol)
            throw ConstraintViolation(j + 1, "transition constraint violated for state " +
                                                 std::to_string(j + 1) + " (slack " +
                                                 std::to_string(report.slack[j].transition) + ")");
        if (report.slack[j].emission < -kFeasibilityTol)
            throw ConstraintViolation(j + 1, "emission constraint violated for state " +
                                                 std::to_string(j + 1) + " (slack " +
                                                 std::to_string(report.slack[j].emission) + ")");
    }
    throw ConstraintViolation(0, "parameters are infeasible: " + report.describe());
}

namespace detail {

void transition_column(const ModelSpec& spec, const ModelParams& params, std::size_t t,
                       std::size_t j, std::span<double> out) {
    const double fj = spec.activity().f(j, t);
    double off_sum = 0.0;
    for (std::size_t i = 0; i < spec.n_states(); ++i) {
        if (i == j) continue;
        out[i] = fj * params.tau(i, j);
        off_sum += out[i];
    }
    out[j] = 1.0 - off_sum;
}

double emission_prob(const ModelSpec& spec, const ModelParams& params, std::size_t t,
                     std::size_t j, int symbol) {
    const double gj = spec.activity().g(j, t);
    if (symbol != 0) return gj * params.epsilon(static_cast<std::size_t>(symbol) - 1, j);
    double sum = 0.0;
    for (std::size_t s = 0; s < spec.n_symbols(); ++s) sum += params.epsilon(s, j);
    return 1.0 - gj * sum;
}

}  // namespace detail

Matrix transition_matrix(const ModelSpec& spec, const ModelParams& params, std::size_t t) {
    if (t + 1 >= spec.horizon())
        throw DimensionMismatch("transition time index out of range");
    require_feasible(spec, params);
    const std::size_t n = spec.n_states();
    Matrix a(n, n);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        detail::transition_column(spec, params, t, j, col);
        for (std::size_t i = 0; i < n; ++i) a(i, j) = col[i];
    }
    return a;
}

std::vector<double> emission_distribution(const ModelSpec& spec, const ModelParams& params,
                                          std::size_t t, std::size_t j) {
    if (t >= spec.horizon() || j >= spec.n_states())
        throw DimensionMismatch("emission index out of range");
    require_feasible(spec, params);
    std::vector<double> dist(spec.n_symbols() + 1);
    for (int s = 0; s <= static_cast<int>(spec.n_symbols()); ++s)
        dist[static_cast<std::size_t>(s)] = detail::emission_prob(spec, params, t, j, s);
    return dist;
}

}  // namespace actihmm
