#include "spikegibbs/crossbar.hpp"

#include <stdexcept>

#include "spikegibbs/util.hpp"

namespace spikegibbs {

void CrossbarHarnessConfig::validate() const
{
    if (weight_half_range < 1) {
        throw std::invalid_argument("crossbar: weight_half_range must be >= 1");
    }
    if (window_steps < 1) {
        throw std::invalid_argument("crossbar: window_steps must be >= 1");
    }
    if (noise_bits < 0 || noise_bits > 31) {
        throw std::invalid_argument("crossbar: noise_bits must be in [0, 31]");
    }
    if (leak_weight < 0) {
        throw std::invalid_argument("crossbar: leak_weight must be >= 0");
    }
    if (stimulus_period < window_steps) {
        throw std::invalid_argument("crossbar: stimulus_period must be >= window_steps");
    }
    if (n_windows == 0) {
        throw std::invalid_argument("crossbar: n_windows must be >= 1; no curve from an empty raster");
    }
}

CrossbarResult crossbar_characterize(const CrossbarHarnessConfig& cfg, std::uint64_t seed)
{
    cfg.validate();

    const int n_neurons = 2 * cfg.weight_half_range + 1;
    std::vector<RngStream> noise_streams;
    noise_streams.reserve(static_cast<std::size_t>(n_neurons));
    for (int i = 0; i < n_neurons; ++i) {
        noise_streams.emplace_back(seed, static_cast<std::uint64_t>(i));
    }
    RngStream leak_stream(seed, static_cast<std::uint64_t>(n_neurons));

    std::vector<std::int64_t> potential(static_cast<std::size_t>(n_neurons), 0);
    std::vector<std::uint8_t> latched(static_cast<std::size_t>(n_neurons), 0);
    std::vector<std::uint64_t> spike_windows(static_cast<std::size_t>(n_neurons), 0);

    CrossbarResult result;
    for (std::uint64_t w = 0; w < cfg.n_windows; ++w) {
        const std::uint64_t base_tick =
            w * static_cast<std::uint64_t>(cfg.stimulus_period);
        // Stimulus spike integrates the axon weight at window start; the
        // idle ticks after the window carry no leak and no threshold draw.
        for (int i = 0; i < n_neurons; ++i) {
            potential[static_cast<std::size_t>(i)] = i - cfg.weight_half_range;
            latched[static_cast<std::size_t>(i)] = 0;
        }
        for (int t = 0; t < cfg.window_steps; ++t) {
            const std::int64_t leak_in =
                static_cast<std::int64_t>(cfg.leak_weight) * leak_stream.next_bernoulli_half();
            for (int i = 0; i < n_neurons; ++i) {
                const auto idx = static_cast<std::size_t>(i);
                potential[idx] += leak_in;
                checked_i32(potential[idx], "crossbar: membrane potential");
                const std::int64_t noise =
                    cfg.noise_bits == 0 ? 0 : noise_streams[idx].next_uniform_bits(cfg.noise_bits);
                if (!latched[idx] &&
                    potential[idx] >= static_cast<std::int64_t>(cfg.threshold) + noise) {
                    latched[idx] = 1;
                    ++spike_windows[idx];
                    result.raster.push_back(
                        {base_tick + static_cast<std::uint64_t>(t), i});
                }
            }
        }
    }

    result.curve.provenance = ActivationCurve::Provenance::empirical;
    result.curve.n_samples = cfg.n_windows;
    result.curve.seed = seed;
    result.curve.points.reserve(static_cast<std::size_t>(n_neurons));
    for (int i = 0; i < n_neurons; ++i) {
        result.curve.points.push_back(
            {i - cfg.weight_half_range,
             static_cast<double>(spike_windows[static_cast<std::size_t>(i)]) /
                 static_cast<double>(cfg.n_windows)});
    }
    return result;
}

} // namespace spikegibbs
