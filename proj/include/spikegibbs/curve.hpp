#pragma once

#include <cstdint>
#include <vector>

#include "spikegibbs/neuron.hpp"

namespace spikegibbs {

struct CurvePoint {
    std::int32_t v = 0;
    double p = 0.0;
};

// Activation curve: input value -> activation probability, with a record
// of where the numbers came from.
struct ActivationCurve {
    enum class Provenance { empirical, exact_oracle, ideal };

    std::vector<CurvePoint> points; // v strictly increasing, p in [0, 1]
    Provenance provenance = Provenance::exact_oracle;
    std::uint64_t n_samples = 0;    // empirical only
    std::uint64_t seed = 0;         // empirical only
    double scale = 0.0;             // ideal only

    void validate() const;
};

// Monte-Carlo sweep: at each grid point v, the mean of n_samples
// sample_unit draws, one independent stream per grid point
// (stream_id = grid index).
ActivationCurve sweep_empirical(const SamplerParams& p, std::int32_t v_min,
                                std::int32_t v_max, std::int32_t v_step,
                                std::uint64_t n_samples, std::uint64_t seed,
                                int threads = 1);

// Exact oracle over the same grid.
ActivationCurve sweep_oracle(const SamplerParams& p, std::int32_t v_min,
                             std::int32_t v_max, std::int32_t v_step);

// Ideal sigmoid over the grid, for overlays and fidelity comparisons.
ActivationCurve sweep_ideal(double scale, std::int32_t v_min, std::int32_t v_max,
                            std::int32_t v_step);

struct CurveDelta {
    double rmse = 0.0;
    double sup_norm = 0.0;
};

// Requires identical v grids.
CurveDelta compare_curves(const ActivationCurve& a, const ActivationCurve& b);

enum class NoiseSource { threshold_only, leak_only };

// Oracle sweep with one of the two noise sources disabled: threshold_only
// forces leak to 0, leak_only forces the threshold noise width to 0.
ActivationCurve single_noise_decomposition(const SamplerParams& p, NoiseSource which,
                                           std::int32_t v_min, std::int32_t v_max,
                                           std::int32_t v_step);

} // namespace spikegibbs
