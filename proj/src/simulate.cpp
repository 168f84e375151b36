#include "actihmm/simulate.hpp"

#include <string>

namespace actihmm {

void check_sequence(const ModelSpec& spec, const EmissionSequence& seq) {
    if (seq.y.size() != spec.horizon())
        throw DimensionMismatch("emission sequence length " + std::to_string(seq.y.size()) +
                                " does not match horizon " + std::to_string(spec.horizon()));
    for (std::size_t t = 0; t < seq.y.size(); ++t) {
        if (seq.y[t] < 0 || seq.y[t] > static_cast<int>(spec.n_symbols()))
            throw std::invalid_argument("emission symbol " + std::to_string(seq.y[t]) +
                                        " at step " + std::to_string(t + 1) + " out of range 0.." +
                                        std::to_string(spec.n_symbols()));
    }
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double uniform_unit(std::uint64_t seed, std::uint64_t counter, std::uint64_t stream) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ counter);
    h = mix64(h ^ stream);
    return static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
}

namespace {

constexpr std::uint64_t kInitialStateStream = 0;
constexpr std::uint64_t kTransitionStream = 1;
constexpr std::uint64_t kEmissionStream = 2;

// Inverse-CDF draw from an explicit distribution; the final index absorbs
// any rounding shortfall.
std::size_t pick(std::span<const double> dist, double u) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < dist.size(); ++k) {
        acc += dist[k];
        if (u < acc) return k;
    }
    return dist.size() - 1;
}

}  // namespace

std::pair<StatePath, EmissionSequence> simulate(const ModelSpec& spec, const ModelParams& params,
                                                std::uint64_t seed) {
    require_feasible(spec, params);
    const std::size_t n = spec.n_states(), m = spec.n_symbols(), T = spec.horizon();

    StatePath path;
    EmissionSequence seq;
    path.x.resize(T);
    seq.y.resize(T);

    std::vector<double> col(n);
    std::vector<double> emit(m + 1);

    std::size_t state = pick(params.pi, uniform_unit(seed, 0, kInitialStateStream));
    path.x[0] = static_cast<int>(state) + 1;
    for (std::size_t t = 0; t + 1 < T; ++t) {
        detail::transition_column(spec, params, t, state, col);
        state = pick(col, uniform_unit(seed, t, kTransitionStream));
        path.x[t + 1] = static_cast<int>(state) + 1;
    }
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t j = static_cast<std::size_t>(path.x[t]) - 1;
        for (int s = 0; s <= static_cast<int>(m); ++s)
            emit[static_cast<std::size_t>(s)] = detail::emission_prob(spec, params, t, j, s);
        seq.y[t] = static_cast<int>(pick(emit, uniform_unit(seed, t, kEmissionStream)));
    }
    return {std::move(path), std::move(seq)};
}

}  // namespace actihmm
