#pragma once

#include <cstdint>
#include <vector>

#include "spikegibbs/dataset.hpp"
#include "spikegibbs/rbm.hpp"

namespace spikegibbs {

struct TrainConfig {
    int n_hidden = 100;
    int epochs = 30;
    double learning_rate = 0.05;
    int minibatch = 20;
    std::uint64_t seed = 0;
    double weight_init_sigma = 0.01;

    void validate() const;
};

struct TrainResult {
    Rbm rbm;
    std::vector<double> epoch_errors; // mean reconstruction error per epoch
};

// One-step contrastive divergence with the ideal sigmoid, momentum 0.
// Weights start N(0, weight_init_sigma^2) from stream (seed, 0); sampling
// and example shuffling draw from stream (seed, 1). Deterministic given
// (config, dataset). epochs = 0 returns the initialized, untrained model.
TrainResult cd1_train(const std::vector<std::vector<std::uint8_t>>& images,
                      const TrainConfig& cfg);

// Label-augmented model: visible layer is [pixels .. one-hot label],
// trained with cd1_train on the concatenated vectors.
TrainResult build_labeled_rbm(const LabeledDataset& ds, int n_classes,
                              const TrainConfig& cfg);

} // namespace spikegibbs
