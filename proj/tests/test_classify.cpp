#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <stdexcept>

#include "spikegibbs/classify.hpp"
#include "spikegibbs/presets.hpp"
#include "spikegibbs/trainer.hpp"

using namespace spikegibbs;

namespace {

// model whose label units are driven by bias only: label 0 strongly on,
// the rest strongly off
QuantizedRbm bias_only_model(int n_pixels, int n_classes)
{
    Rbm m;
    m.n_visible = n_pixels + n_classes;
    m.n_hidden = 4;
    m.weights.assign(static_cast<std::size_t>(m.n_visible) * m.n_hidden, 0.0);
    m.visible_bias.assign(static_cast<std::size_t>(m.n_visible), 0.0);
    m.hidden_bias.assign(static_cast<std::size_t>(m.n_hidden), 0.0);
    for (int c = 0; c < n_classes; ++c) {
        m.visible_bias[static_cast<std::size_t>(n_pixels + c)] = c == 0 ? 4.0 : -4.0;
    }
    return quantize(m, 50.0).rbm;
}

// two-class toy set: class 0 lights the left half, class 1 the right half
LabeledDataset toy_dataset(int per_class)
{
    LabeledDataset ds;
    ds.width = 4;
    ds.height = 4;
    RngStream stream(4242, 0);
    for (int k = 0; k < 2 * per_class; ++k) {
        const int label = k % 2;
        std::vector<std::uint8_t> image(16, 0);
        for (int y = 0; y < 4; ++y) {
            for (int x = 0; x < 4; ++x) {
                const bool lit = label == 0 ? x < 2 : x >= 2;
                image[static_cast<std::size_t>(y) * 4 + x] =
                    lit && stream.next_real01() < 0.95 ? 1 : 0;
            }
        }
        ds.images.push_back(std::move(image));
        ds.labels.push_back(label);
    }
    return ds;
}

} // namespace

TEST_CASE("bias-saturated model always answers label zero")
{
    const auto q = bias_only_model(9, 10);
    ClassifyConfig cfg;
    cfg.sampler = IdealSampler{50.0};
    cfg.n_gibbs = 10;
    cfg.seed = 3;
    const std::vector<std::uint8_t> image(9, 0);
    for (std::uint64_t s = 0; s < 20; ++s) {
        cfg.seed = s;
        CHECK(classify_one(q, image, 10, cfg) == 0);
    }
}

TEST_CASE("classification is deterministic given the seed")
{
    const auto q = bias_only_model(9, 4);
    ClassifyConfig cfg;
    cfg.sampler = DigitalSampler{presets::p2()};
    cfg.n_gibbs = 1;
    cfg.seed = 99;
    const std::vector<std::uint8_t> image = {1, 0, 1, 0, 1, 0, 1, 0, 1};
    const int first = classify_one(q, image, 4, cfg);
    for (int k = 0; k < 10; ++k) {
        CHECK(classify_one(q, image, 4, cfg) == first);
    }
}

TEST_CASE("dimension mismatches are rejected")
{
    const auto q = bias_only_model(9, 4);
    ClassifyConfig cfg;
    cfg.sampler = IdealSampler{50.0};
    const std::vector<std::uint8_t> small(5, 0);
    CHECK_THROWS_AS(classify_one(q, small, 4, cfg), std::invalid_argument);
    cfg.n_gibbs = 0;
    const std::vector<std::uint8_t> image(9, 0);
    CHECK_THROWS_AS(classify_one(q, image, 4, cfg), std::invalid_argument);
}

TEST_CASE("a trained toy model separates the two classes")
{
    const auto ds = toy_dataset(60);
    TrainConfig tcfg;
    tcfg.n_hidden = 12;
    tcfg.epochs = 40;
    tcfg.seed = 7;
    const auto trained = build_labeled_rbm(ds, 2, tcfg);
    const auto q = quantize(trained.rbm, 50.0).rbm;

    ClassifyConfig cfg;
    cfg.sampler = IdealSampler{50.0};
    cfg.n_gibbs = 10;
    cfg.seed = 11;
    const auto test_set = toy_dataset(25);
    const auto result = evaluate(q, test_set, 2, cfg, 2);
    CHECK(result.accuracy > 0.9);

    SUBCASE("confusion matrix counts every image exactly once")
    {
        const std::uint64_t total =
            std::accumulate(result.confusion.begin(), result.confusion.end(),
                            std::uint64_t{0});
        CHECK(total == test_set.size());
    }
    SUBCASE("evaluation is reproducible and thread-invariant")
    {
        const auto again = evaluate(q, test_set, 2, cfg, 1);
        CHECK(again.accuracy == result.accuracy);
        CHECK(again.confusion == result.confusion);
        const auto threaded = evaluate(q, test_set, 2, cfg, 8);
        CHECK(threaded.confusion == result.confusion);
    }
    SUBCASE("digital sampler stays close to ideal on the toy task")
    {
        ClassifyConfig dig = cfg;
        dig.sampler = DigitalSampler{presets::p7()};
        const auto qd = quantize(trained.rbm, 100.0).rbm;
        const auto digital = evaluate(qd, test_set, 2, dig, 2);
        CHECK(std::abs(digital.accuracy - result.accuracy) <= 0.1);
    }
    SUBCASE("noise sweep degrades gracefully and starts at the clean accuracy")
    {
        const double factors[] = {0.0, 0.3};
        const auto points =
            noise_sweep(q, test_set, 2, cfg, NoiseProvenance::Kind::salt, factors, 21, 2);
        REQUIRE(points.size() == 2);
        CHECK(points[0].factor == 0.0);
        CHECK(points[0].accuracy == result.accuracy);
        CHECK(points[1].accuracy <= points[0].accuracy + 0.1);
    }
}

TEST_CASE("per-image seeds make evaluation order-free")
{
    const auto q = bias_only_model(9, 4);
    ClassifyConfig cfg;
    cfg.sampler = IdealSampler{50.0};
    cfg.n_gibbs = 5;
    cfg.seed = 40;

    LabeledDataset ds;
    ds.width = 3;
    ds.height = 3;
    RngStream stream(1, 0);
    for (int k = 0; k < 12; ++k) {
        std::vector<std::uint8_t> image(9);
        for (auto& p : image) {
            p = static_cast<std::uint8_t>(stream.next_bernoulli_half());
        }
        ds.images.push_back(std::move(image));
        ds.labels.push_back(0);
    }
    // classifying image k alone with its derived seed matches evaluate()
    const auto result = evaluate(q, ds, 4, cfg, 3);
    std::uint64_t matches = 0;
    for (std::size_t k = 0; k < ds.size(); ++k) {
        ClassifyConfig one = cfg;
        one.seed = derive_seed(cfg.seed, k);
        matches += classify_one(q, ds.images[k], 4, one) == 0 ? 1 : 0;
    }
    CHECK(static_cast<double>(matches) / 12.0 == result.accuracy);
}
