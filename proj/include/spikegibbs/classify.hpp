#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spikegibbs/dataset.hpp"
#include "spikegibbs/rbm.hpp"

namespace spikegibbs {

struct ClassifyConfig {
    SamplerKind sampler;
    int n_gibbs = 10; // clamped label-inference sweeps
    std::uint64_t seed = 0;
};

// Clamps the pixel visibles to the image, starts the label visibles at 0,
// runs n_gibbs clamped sweeps and votes: the label unit sampled 1 in the
// most sweeps wins, ties to the lowest index.
int classify_one(const QuantizedRbm& labeled, std::span<const std::uint8_t> image,
                 int n_classes, const ClassifyConfig& cfg);

struct EvalResult {
    double accuracy = 0.0;
    int n_classes = 0;
    std::vector<std::uint64_t> confusion; // row = true label, col = predicted

    std::uint64_t at(int truth, int predicted) const
    {
        return confusion[static_cast<std::size_t>(truth) * n_classes + predicted];
    }
};

// Image k classifies with seed derive_seed(cfg.seed, k), so evaluation
// order and parallelism cannot change any prediction.
EvalResult evaluate(const QuantizedRbm& labeled, const LabeledDataset& ds, int n_classes,
                    const ClassifyConfig& cfg, int threads = 1);

struct NoisePoint {
    double factor = 0.0;
    double accuracy = 0.0;
};

// Accuracy per noise factor, each on a freshly corrupted copy of the
// dataset (corruption seed derive_seed(noise_seed, factor index)).
std::vector<NoisePoint> noise_sweep(const QuantizedRbm& labeled, const LabeledDataset& ds,
                                    int n_classes, const ClassifyConfig& cfg,
                                    NoiseProvenance::Kind kind,
                                    std::span<const double> factors,
                                    std::uint64_t noise_seed, int threads = 1);

} // namespace spikegibbs
