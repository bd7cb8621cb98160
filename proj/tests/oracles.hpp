#pragma once

// Test-only oracles. These re-derive expected values by brute force and
// must stay independent of the library code paths they check.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "spikegibbs/neuron.hpp"
#include "spikegibbs/rng.hpp"

namespace spikegibbs::test {

// P(sampled bit == 1) by literal enumeration: every leak-gate path times
// every threshold-draw tuple, each outcome equally likely, the window
// replayed step by step. (2 * 2^noise_bits)^window_steps outcomes.
inline double enumerate_activation_probability(std::int32_t input, const SamplerParams& p)
{
    const int steps = p.window_steps;
    const std::int64_t n_noise = std::int64_t{1} << p.noise_bits;
    std::uint64_t spiked_outcomes = 0;
    std::uint64_t total_outcomes = 0;
    std::vector<std::int64_t> draws(static_cast<std::size_t>(steps), 0);
    for (std::uint32_t gates = 0; gates < (1u << steps); ++gates) {
        std::fill(draws.begin(), draws.end(), 0);
        while (true) {
            std::int64_t v = input;
            bool spiked = false;
            for (int t = 0; t < steps; ++t) {
                if ((gates >> t) & 1u) {
                    v += p.leak;
                }
                if (v >= p.threshold + draws[static_cast<std::size_t>(t)]) {
                    spiked = true;
                }
            }
            spiked_outcomes += spiked ? 1 : 0;
            ++total_outcomes;
            int d = 0;
            while (d < steps && ++draws[static_cast<std::size_t>(d)] == n_noise) {
                draws[static_cast<std::size_t>(d)] = 0;
                ++d;
            }
            if (d == steps) {
                break;
            }
        }
    }
    return static_cast<double>(spiked_outcomes) / static_cast<double>(total_outcomes);
}

inline double empirical_activation(std::int32_t input, const SamplerParams& p,
                                   std::uint64_t n, std::uint64_t seed,
                                   std::uint64_t stream_id = 0)
{
    RngStream stream(seed, stream_id);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < n; ++s) {
        hits += static_cast<std::uint64_t>(sample_unit(input, p, stream));
    }
    return static_cast<double>(hits) / static_cast<double>(n);
}

} // namespace spikegibbs::test
