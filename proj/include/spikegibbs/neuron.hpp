#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spikegibbs/rng.hpp"

namespace spikegibbs {

// Parameters of one stochastic sampling window. A unit's sampled value is
// produced by integrating for window_steps ticks with a Bernoulli(0.5)
// gated leak and a noise_bits-wide uniform threshold offset; the value is
// 1 if the potential crossed the threshold in any tick.
struct SamplerParams {
    int window_steps = 1;          // >= 1
    std::int32_t threshold = 0;    // fixed threshold base
    int noise_bits = 0;            // [0, 31]; 0 = deterministic threshold
    std::int32_t leak = 0;         // stochastic leak magnitude, >= 0
    double scale = 1.0;            // weight multiplier applied at quantization

    void validate() const;
};

// Integrate-and-fire neuron with deterministic leak; used by the crossbar
// harness. Weight list length equals the axon fan-in.
struct NeuronConfig {
    std::vector<std::int32_t> weights;
    std::int32_t leak = 0;         // subtracted each step
    std::int32_t threshold = 0;
    std::int32_t reset = 0;
};

struct NeuronState {
    std::int32_t potential = 0;
    bool spiked_in_window = false;
};

struct StepResult {
    NeuronState state;
    int spike = 0;
};

// One integrate-and-fire tick: integrate weighted inputs, subtract the
// deterministic leak, spike and reset when the threshold is reached.
StepResult step_if(NeuronState state, const NeuronConfig& cfg,
                   std::span<const std::uint8_t> inputs);

// Runs one full sampling window on the already-scaled integer input and
// returns the sampled bit. Always consumes window_steps Bernoulli draws
// plus, when noise_bits > 0, window_steps uniform draws -- also after the
// spike has been latched, so stream positions do not depend on the outcome.
int sample_unit(std::int32_t input, const SamplerParams& p, RngStream& stream);

// Exact P(sample_unit(input) == 1), by dynamic programming over the count
// of taken leak steps. O(window_steps^2); window_steps <= 64.
double exact_activation_probability(std::int32_t input, const SamplerParams& p);

// 1 / (1 + e^(-v/scale)).
double ideal_activation_probability(double v, double scale);

} // namespace spikegibbs
