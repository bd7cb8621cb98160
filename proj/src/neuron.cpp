#include "spikegibbs/neuron.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spikegibbs/util.hpp"

namespace spikegibbs {

void SamplerParams::validate() const
{
    if (window_steps < 1) {
        throw std::invalid_argument("sampler: window_steps must be >= 1");
    }
    if (noise_bits < 0 || noise_bits > 31) {
        throw std::invalid_argument("sampler: noise_bits must be in [0, 31]");
    }
    if (leak < 0) {
        throw std::invalid_argument("sampler: leak must be >= 0");
    }
    if (!(scale > 0.0)) {
        throw std::invalid_argument("sampler: scale must be > 0");
    }
}

StepResult step_if(NeuronState state, const NeuronConfig& cfg,
                   std::span<const std::uint8_t> inputs)
{
    if (inputs.size() != cfg.weights.size()) {
        throw std::invalid_argument("step_if: input count does not match fan-in");
    }
    std::int64_t v = state.potential;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i]) {
            v += cfg.weights[i];
        }
    }
    v -= cfg.leak;
    checked_i32(v, "step_if: membrane potential");

    StepResult out;
    out.state = state;
    if (v >= cfg.threshold) {
        out.spike = 1;
        out.state.spiked_in_window = true;
        v = cfg.reset;
    }
    out.state.potential = static_cast<std::int32_t>(v);
    return out;
}

int sample_unit(std::int32_t input, const SamplerParams& p, RngStream& stream)
{
    p.validate();
    std::int64_t v = input;
    bool spiked = false;
    for (int t = 0; t < p.window_steps; ++t) {
        v += static_cast<std::int64_t>(p.leak) * stream.next_bernoulli_half();
        checked_i32(v, "sample_unit: membrane potential");
        const std::int64_t noise =
            p.noise_bits == 0 ? 0 : stream.next_uniform_bits(p.noise_bits);
        if (v >= static_cast<std::int64_t>(p.threshold) + noise) {
            spiked = true; // latched; keep integrating so draw counts stay fixed
        }
    }
    return spiked ? 1 : 0;
}

double exact_activation_probability(std::int32_t input, const SamplerParams& p)
{
    p.validate();
    if (p.window_steps > 64) {
        throw std::invalid_argument("exact_activation_probability: window_steps must be <= 64");
    }

    const double noise_values = std::ldexp(1.0, p.noise_bits); // 2^noise_bits
    const auto no_spike = [&](std::int64_t v) {
        // P(v < threshold + u), u uniform on [0, 2^noise_bits - 1]
        const std::int64_t favorable = v - p.threshold + 1;
        if (favorable <= 0) {
            return 1.0;
        }
        if (static_cast<double>(favorable) >= noise_values) {
            return 0.0;
        }
        return 1.0 - static_cast<double>(favorable) / noise_values;
    };

    // alive[k] = P(no spike yet and k leak steps were taken)
    std::vector<double> alive{1.0};
    for (int t = 1; t <= p.window_steps; ++t) {
        std::vector<double> next(static_cast<std::size_t>(t) + 1, 0.0);
        for (int k = 0; k <= t; ++k) {
            double mass = 0.0;
            if (k < t) {
                mass += 0.5 * alive[k];
            }
            if (k >= 1) {
                mass += 0.5 * alive[k - 1];
            }
            if (mass != 0.0) {
                const std::int64_t v = input + static_cast<std::int64_t>(p.leak) * k;
                next[k] = mass * no_spike(v);
            }
        }
        alive = std::move(next);
    }

    double none = 0.0;
    for (const double mass : alive) {
        none += mass;
    }
    return std::clamp(1.0 - none, 0.0, 1.0);
}

double ideal_activation_probability(double v, double scale)
{
    if (!(scale > 0.0)) {
        throw std::invalid_argument("ideal_activation_probability: scale must be > 0");
    }
    return 1.0 / (1.0 + std::exp(-v / scale));
}

} // namespace spikegibbs
