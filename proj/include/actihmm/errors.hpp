#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace actihmm {

// Model dimensions (N, M, T) disagree between two objects.
class DimensionMismatch : public std::invalid_argument {
public:
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Parameters violate a feasibility constraint.  `state` is the offending
// state label, 1-based as in sequence files.
class ConstraintViolation : public std::domain_error {
public:
    ConstraintViolation(std::size_t state, const std::string& what)
        : std::domain_error(what), state_(state) {}
    std::size_t state() const { return state_; }

private:
    std::size_t state_;
};

// The observed sequence has probability zero under the given parameters.
// `time_step` is the first offending position, 1-based.
class ImpossibleObservation : public std::runtime_error {
public:
    ImpossibleObservation(std::size_t time_step, const std::string& what)
        : std::runtime_error(what), time_step_(time_step) {}
    std::size_t time_step() const { return time_step_; }

private:
    std::size_t time_step_;
};

// Sufficient statistics claim an event (a transition or an emission) that the
// activity levels make impossible.
class InconsistentStats : public std::logic_error {
public:
    InconsistentStats(std::size_t state, const std::string& what)
        : std::logic_error(what), state_(state) {}
    std::size_t state() const { return state_; }

private:
    std::size_t state_;
};

// Raised when the interpolation heuristic cannot produce a starting point.
class CannotInitialize : public std::runtime_error {
public:
    explicit CannotInitialize(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace actihmm
