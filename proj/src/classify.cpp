#include "spikegibbs/classify.hpp"

#include <algorithm>
#include <stdexcept>

#include "spikegibbs/util.hpp"

namespace spikegibbs {

int classify_one(const QuantizedRbm& labeled, std::span<const std::uint8_t> image,
                 int n_classes, const ClassifyConfig& cfg)
{
    if (cfg.n_gibbs < 1) {
        throw std::invalid_argument("classify: n_gibbs must be >= 1");
    }
    if (n_classes < 2 || n_classes >= labeled.n_visible) {
        throw std::invalid_argument("classify: class count does not fit the model");
    }
    const int n_pixels = labeled.n_visible - n_classes;
    if (image.size() != static_cast<std::size_t>(n_pixels)) {
        throw std::invalid_argument("classify: image size does not match the model");
    }

    std::vector<std::uint8_t> visible(static_cast<std::size_t>(labeled.n_visible), 0);
    std::copy(image.begin(), image.end(), visible.begin());

    GibbsOptions options;
    options.record_histogram = false;
    options.clamp_mask = std::vector<std::uint8_t>(
        static_cast<std::size_t>(labeled.n_visible), 0);
    std::fill_n(options.clamp_mask->begin(), n_pixels, std::uint8_t{1});

    std::vector<std::uint32_t> votes(static_cast<std::size_t>(n_classes), 0);
    options.on_sweep = [&](std::span<const std::uint8_t> v,
                           std::span<const std::uint8_t>) {
        for (int c = 0; c < n_classes; ++c) {
            votes[static_cast<std::size_t>(c)] +=
                v[static_cast<std::size_t>(n_pixels + c)];
        }
    };

    gibbs_chain(labeled, std::move(visible), static_cast<std::uint64_t>(cfg.n_gibbs),
                cfg.sampler, cfg.seed, options);

    int best = 0;
    for (int c = 1; c < n_classes; ++c) {
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) {
            best = c; // ties keep the lowest index
        }
    }
    return best;
}

EvalResult evaluate(const QuantizedRbm& labeled, const LabeledDataset& ds, int n_classes,
                    const ClassifyConfig& cfg, int threads)
{
    ds.validate();
    if (ds.images.empty()) {
        throw std::invalid_argument("evaluate: empty dataset");
    }

    std::vector<int> predicted(ds.images.size());
    parallel_for(ds.images.size(), threads, [&](std::size_t k) {
        ClassifyConfig per_image = cfg;
        per_image.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(k));
        predicted[k] = classify_one(labeled, ds.images[k], n_classes, per_image);
    });

    EvalResult result;
    result.n_classes = n_classes;
    result.confusion.assign(static_cast<std::size_t>(n_classes) * n_classes, 0);
    std::uint64_t correct = 0;
    for (std::size_t k = 0; k < ds.images.size(); ++k) {
        const int truth = ds.labels[k];
        if (truth < 0 || truth >= n_classes) {
            throw std::invalid_argument("evaluate: label out of range");
        }
        ++result.confusion[static_cast<std::size_t>(truth) * n_classes + predicted[k]];
        if (truth == predicted[k]) {
            ++correct;
        }
    }
    result.accuracy = static_cast<double>(correct) / static_cast<double>(ds.images.size());
    return result;
}

std::vector<NoisePoint> noise_sweep(const QuantizedRbm& labeled, const LabeledDataset& ds,
                                    int n_classes, const ClassifyConfig& cfg,
                                    NoiseProvenance::Kind kind,
                                    std::span<const double> factors,
                                    std::uint64_t noise_seed, int threads)
{
    std::vector<NoisePoint> out;
    out.reserve(factors.size());
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const std::uint64_t seed = derive_seed(noise_seed, static_cast<std::uint64_t>(f));
        const LabeledDataset corrupted =
            kind == NoiseProvenance::Kind::salt
                ? add_salt_noise(ds, factors[f], seed)
                : add_salt_pepper_noise(ds, factors[f], seed);
        out.push_back({factors[f],
                       evaluate(labeled, corrupted, n_classes, cfg, threads).accuracy});
    }
    return out;
}

} // namespace spikegibbs
