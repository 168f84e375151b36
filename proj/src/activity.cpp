#include "actihmm/activity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "actihmm/errors.hpp"

namespace actihmm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double activity_raised_cosine(double n, std::int64_t period, std::int64_t t) {
    if (!(n > 0.0)) throw std::invalid_argument("raised cosine needs n > 0");
    if (period < 1) throw std::invalid_argument("period must be >= 1");
    return (n - std::cos(kTwoPi * static_cast<double>(t) / static_cast<double>(period))) /
           (n + 1.0);
}

double activity_shifted_cosine(std::int64_t j, std::int64_t period, std::int64_t t,
                               std::int64_t shift_step) {
    if (period < 1) throw std::invalid_argument("period must be >= 1");
    const double arg = kTwoPi * static_cast<double>(t - shift_step * j) /
                       static_cast<double>(period);
    return (2.0 - std::cos(arg)) / 3.0;
}

std::vector<double> sample_activity(const std::function<double(std::int64_t)>& fn,
                                    std::size_t horizon) {
    std::vector<double> out(horizon);
    for (std::size_t k = 0; k < horizon; ++k)
        out[k] = fn(static_cast<std::int64_t>(k) + 1);
    return out;
}

ActivityProfile::ActivityProfile(Matrix f, Matrix g) : f_(std::move(f)), g_(std::move(g)) {
    if (f_.rows() != g_.rows() || f_.cols() != g_.cols())
        throw DimensionMismatch("activity arrays f and g must have equal shape");
    if (f_.rows() == 0 || f_.cols() < 2)
        throw DimensionMismatch("activity profile needs >= 1 state and horizon >= 2");

    const std::size_t n = f_.rows(), T = f_.cols();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t t = 0; t < T; ++t) {
            if (!(f_(j, t) >= 0.0 && f_(j, t) <= 1.0) || !(g_(j, t) >= 0.0 && g_(j, t) <= 1.0))
                throw std::invalid_argument("activity values must lie in [0, 1]");
        }
    }

    f_star_.assign(n, 0.0);
    g_star_.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t t = 0; t + 1 < T; ++t) f_star_[j] = std::max(f_star_[j], f_(j, t));
        for (std::size_t t = 0; t < T; ++t) g_star_[j] = std::max(g_star_[j], g_(j, t));
    }
}

ActivityProfile ActivityProfile::constant(std::size_t n_states, std::size_t horizon) {
    return ActivityProfile(Matrix(n_states, horizon, 1.0), Matrix(n_states, horizon, 1.0));
}

}  // namespace actihmm
