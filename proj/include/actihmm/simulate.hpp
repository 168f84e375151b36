#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "actihmm/model.hpp"

namespace actihmm {

// Hidden state path, values 1..N.
struct StatePath {
    std::vector<int> x;
};

// Observed emissions, values 0..M (0 = no emission).
struct EmissionSequence {
    std::vector<int> y;
};

// Throws if the sequence length or symbol range does not match the spec.
void check_sequence(const ModelSpec& spec, const EmissionSequence& seq);

// Counter-based uniform deviates: identical output for identical
// (seed, counter, stream) on every platform, with no generator state to
// advance.  Built on the splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);
double uniform_unit(std::uint64_t seed, std::uint64_t counter, std::uint64_t stream);

// Sequential draws from one keyed stream.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}
    double next() { return uniform_unit(seed_, counter_++, stream_); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

// Draws x_1 ~ pi, x_{t+1} ~ column x_t of A(t), y_t ~ emission distribution
// of x_t at t.  Deterministic given (spec, params, seed); categorical draws
// use inverse-CDF over the column.
std::pair<StatePath, EmissionSequence> simulate(const ModelSpec& spec,
                                                const ModelParams& params,
                                                std::uint64_t seed);

}  // namespace actihmm
