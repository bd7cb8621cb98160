#pragma once

#include <cstdint>
#include <vector>

#include "spikegibbs/curve.hpp"

namespace spikegibbs {

// Crossbar characterization circuit: 2K+1 data neurons, neuron k wired to
// one axon with weight k - K, driven by a deterministic input spike once
// per stimulus period, plus a single shared leak neuron whose
// Bernoulli(0.5) spikes reach every data neuron through weight leak_weight.
struct CrossbarHarnessConfig {
    int weight_half_range = 100;   // K; weights run -K..K in steps of 1
    int window_steps = 16;
    std::int32_t threshold = 50;
    int noise_bits = 9;
    std::int32_t leak_weight = 15;
    int stimulus_period = 18;      // >= window_steps; trailing ticks are idle
    std::uint64_t n_windows = 1000;

    void validate() const;
};

struct SpikeEvent {
    std::uint64_t tick = 0;
    std::int32_t neuron = 0; // index 0..2K, weight = index - K
};

struct CrossbarResult {
    ActivationCurve curve;          // v = weight, p = windows with a spike / n_windows
    std::vector<SpikeEvent> raster; // first spike per neuron per window, tick order
};

// Stream layout: data neuron i draws its threshold noise from
// (seed, i); the shared leak neuron uses (seed, 2K+1). One leak draw per
// tick is broadcast to all data neurons, so neurons are correlated within
// a tick but each marginal matches sample_unit exactly.
CrossbarResult crossbar_characterize(const CrossbarHarnessConfig& cfg,
                                     std::uint64_t seed);

} // namespace spikegibbs
