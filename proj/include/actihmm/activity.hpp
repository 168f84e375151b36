#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "actihmm/matrix.hpp"

namespace actihmm {

// Pointwise activity functions.  All take an integer time step and return a
// value in [0, 1] (raised_cosine requires n >= 1 for the upper bound).

inline double activity_constant(std::int64_t /*t*/) { return 1.0; }

// (n - cos(2*pi*t/period)) / (n + 1)
double activity_raised_cosine(double n, std::int64_t period, std::int64_t t);

// (1/3) * (2 - cos(2*pi*(t - shift_step*j)/period)); j is a state label.
double activity_shifted_cosine(std::int64_t j, std::int64_t period, std::int64_t t,
                               std::int64_t shift_step = 6);

// Samples fn on the time grid t = 1..horizon.
std::vector<double> sample_activity(const std::function<double(std::int64_t)>& fn,
                                    std::size_t horizon);

// Per-state transition and emission activity levels on the discrete grid.
//
// f and g are n_states x horizon with entries in [0, 1]; row j holds state
// j's series.  Grid index k corresponds to time step k+1.  The per-state
// maxima are cached at construction: f_star over grid indices 0..horizon-2
// (transitions act between consecutive steps) and g_star over the full grid.
class ActivityProfile {
public:
    ActivityProfile(Matrix f, Matrix g);

    static ActivityProfile constant(std::size_t n_states, std::size_t horizon);

    std::size_t n_states() const { return f_.rows(); }
    std::size_t horizon() const { return f_.cols(); }

    double f(std::size_t j, std::size_t t) const { return f_(j, t); }
    double g(std::size_t j, std::size_t t) const { return g_(j, t); }
    std::span<const double> f_row(std::size_t j) const { return f_.row(j); }
    std::span<const double> g_row(std::size_t j) const { return g_.row(j); }

    double f_star(std::size_t j) const { return f_star_[j]; }
    double g_star(std::size_t j) const { return g_star_[j]; }

private:
    Matrix f_;
    Matrix g_;
    std::vector<double> f_star_;
    std::vector<double> g_star_;
};

}  // namespace actihmm
