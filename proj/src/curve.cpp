#include "spikegibbs/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spikegibbs/util.hpp"

namespace spikegibbs {

namespace {

std::vector<std::int32_t> make_grid(std::int32_t v_min, std::int32_t v_max,
                                    std::int32_t v_step)
{
    if (v_step < 1) {
        throw std::invalid_argument("sweep: v_step must be >= 1");
    }
    if (v_min > v_max) {
        throw std::invalid_argument("sweep: empty grid (v_min > v_max)");
    }
    std::vector<std::int32_t> grid;
    for (std::int64_t v = v_min; v <= v_max; v += v_step) {
        grid.push_back(static_cast<std::int32_t>(v));
    }
    return grid;
}

} // namespace

void ActivationCurve::validate() const
{
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].p < 0.0 || points[i].p > 1.0) {
            throw std::logic_error("activation curve: probability out of [0, 1]");
        }
        if (i > 0 && points[i - 1].v >= points[i].v) {
            throw std::logic_error("activation curve: v grid not strictly increasing");
        }
    }
}

ActivationCurve sweep_empirical(const SamplerParams& p, std::int32_t v_min,
                                std::int32_t v_max, std::int32_t v_step,
                                std::uint64_t n_samples, std::uint64_t seed,
                                int threads)
{
    p.validate();
    if (n_samples == 0) {
        throw std::invalid_argument("sweep_empirical: n_samples must be >= 1");
    }
    const auto grid = make_grid(v_min, v_max, v_step);

    ActivationCurve curve;
    curve.provenance = ActivationCurve::Provenance::empirical;
    curve.n_samples = n_samples;
    curve.seed = seed;
    curve.points.resize(grid.size());

    parallel_for(grid.size(), threads, [&](std::size_t g) {
        RngStream stream(seed, static_cast<std::uint64_t>(g));
        std::uint64_t hits = 0;
        for (std::uint64_t s = 0; s < n_samples; ++s) {
            hits += static_cast<std::uint64_t>(sample_unit(grid[g], p, stream));
        }
        curve.points[g] = {grid[g],
                           static_cast<double>(hits) / static_cast<double>(n_samples)};
    });
    return curve;
}

ActivationCurve sweep_oracle(const SamplerParams& p, std::int32_t v_min,
                             std::int32_t v_max, std::int32_t v_step)
{
    p.validate();
    const auto grid = make_grid(v_min, v_max, v_step);
    ActivationCurve curve;
    curve.provenance = ActivationCurve::Provenance::exact_oracle;
    curve.points.reserve(grid.size());
    for (const std::int32_t v : grid) {
        curve.points.push_back({v, exact_activation_probability(v, p)});
    }
    return curve;
}

ActivationCurve sweep_ideal(double scale, std::int32_t v_min, std::int32_t v_max,
                            std::int32_t v_step)
{
    const auto grid = make_grid(v_min, v_max, v_step);
    ActivationCurve curve;
    curve.provenance = ActivationCurve::Provenance::ideal;
    curve.scale = scale;
    curve.points.reserve(grid.size());
    for (const std::int32_t v : grid) {
        curve.points.push_back({v, ideal_activation_probability(v, scale)});
    }
    return curve;
}

CurveDelta compare_curves(const ActivationCurve& a, const ActivationCurve& b)
{
    if (a.points.size() != b.points.size()) {
        throw std::invalid_argument("compare_curves: grids differ in length");
    }
    CurveDelta delta;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        if (a.points[i].v != b.points[i].v) {
            throw std::invalid_argument("compare_curves: grids differ at index " +
                                        std::to_string(i));
        }
        const double d = a.points[i].p - b.points[i].p;
        sum_sq += d * d;
        delta.sup_norm = std::max(delta.sup_norm, std::abs(d));
    }
    if (!a.points.empty()) {
        delta.rmse = std::sqrt(sum_sq / static_cast<double>(a.points.size()));
    }
    return delta;
}

ActivationCurve single_noise_decomposition(const SamplerParams& p, NoiseSource which,
                                           std::int32_t v_min, std::int32_t v_max,
                                           std::int32_t v_step)
{
    SamplerParams reduced = p;
    if (which == NoiseSource::threshold_only) {
        reduced.leak = 0;
    } else {
        reduced.noise_bits = 0;
    }
    return sweep_oracle(reduced, v_min, v_max, v_step);
}

} // namespace spikegibbs
