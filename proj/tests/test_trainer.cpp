#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "spikegibbs/trainer.hpp"

using namespace spikegibbs;

namespace {

// 4x4 checkerboard-ish pattern for the memorization check
const std::vector<std::uint8_t> kPattern = {1, 0, 1, 0, 0, 1, 0, 1,
                                            1, 0, 1, 0, 0, 1, 0, 1};

double sigmoid(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

// Mean pixel mismatch after one sampled Gibbs sweep, averaged over repeats.
double reconstruction_mismatch(const Rbm& m, const std::vector<std::uint8_t>& v0,
                               int repeats, std::uint64_t seed)
{
    RngStream stream(seed, 0);
    double total = 0.0;
    std::vector<std::uint8_t> h(static_cast<std::size_t>(m.n_hidden));
    for (int r = 0; r < repeats; ++r) {
        for (int j = 0; j < m.n_hidden; ++j) {
            double f = m.hidden_bias[static_cast<std::size_t>(j)];
            for (int i = 0; i < m.n_visible; ++i) {
                if (v0[static_cast<std::size_t>(i)]) {
                    f += m.w(i, j);
                }
            }
            h[static_cast<std::size_t>(j)] = stream.next_real01() < sigmoid(f) ? 1 : 0;
        }
        for (int i = 0; i < m.n_visible; ++i) {
            double f = m.visible_bias[static_cast<std::size_t>(i)];
            for (int j = 0; j < m.n_hidden; ++j) {
                if (h[static_cast<std::size_t>(j)]) {
                    f += m.w(i, j);
                }
            }
            const int v1 = stream.next_real01() < sigmoid(f) ? 1 : 0;
            total += std::abs(v1 - static_cast<int>(v0[static_cast<std::size_t>(i)]));
        }
    }
    return total / (static_cast<double>(repeats) * m.n_visible);
}

} // namespace

TEST_CASE("cd1 memorizes a single repeated vector")
{
    TrainConfig cfg;
    cfg.n_hidden = 4;
    cfg.epochs = 200;
    cfg.learning_rate = 0.05;
    cfg.minibatch = 5;
    cfg.seed = 42;
    std::vector<std::vector<std::uint8_t>> data(10, kPattern);
    const auto result = cd1_train(data, cfg);
    CHECK(result.epoch_errors.size() == 200);
    const double mismatch = reconstruction_mismatch(result.rbm, kPattern, 200, 7);
    CHECK(mismatch < 0.05);
}

TEST_CASE("zero epochs returns the initialized model")
{
    TrainConfig cfg;
    cfg.n_hidden = 3;
    cfg.epochs = 0;
    cfg.seed = 9;
    std::vector<std::vector<std::uint8_t>> data(4, kPattern);
    const auto result = cd1_train(data, cfg);
    CHECK(result.epoch_errors.empty());
    CHECK(result.rbm.n_visible == 16);
    CHECK(result.rbm.n_hidden == 3);
    for (const double b : result.rbm.visible_bias) {
        CHECK(b == 0.0);
    }
    // weights are small gaussian init, not all zero
    double norm = 0.0;
    for (const double w : result.rbm.weights) {
        norm += w * w;
        CHECK(std::abs(w) < 0.1);
    }
    CHECK(norm > 0.0);
}

TEST_CASE("training is deterministic in the seed")
{
    TrainConfig cfg;
    cfg.n_hidden = 5;
    cfg.epochs = 3;
    cfg.seed = 1234;
    std::vector<std::vector<std::uint8_t>> data;
    RngStream stream(55, 0);
    for (int k = 0; k < 40; ++k) {
        std::vector<std::uint8_t> v(16);
        for (auto& b : v) {
            b = static_cast<std::uint8_t>(stream.next_bernoulli_half());
        }
        data.push_back(std::move(v));
    }
    const auto a = cd1_train(data, cfg);
    const auto b = cd1_train(data, cfg);
    CHECK(a.rbm.weights == b.rbm.weights);
    CHECK(a.rbm.visible_bias == b.rbm.visible_bias);
    CHECK(a.rbm.hidden_bias == b.rbm.hidden_bias);
    CHECK(a.epoch_errors == b.epoch_errors);

    cfg.seed = 1235;
    const auto c = cd1_train(data, cfg);
    CHECK(a.rbm.weights != c.rbm.weights);
}

TEST_CASE("epoch errors stay finite")
{
    TrainConfig cfg;
    cfg.n_hidden = 8;
    cfg.epochs = 10;
    cfg.learning_rate = 0.5; // aggressive but should stay finite
    cfg.seed = 3;
    std::vector<std::vector<std::uint8_t>> data(30, kPattern);
    const auto result = cd1_train(data, cfg);
    for (const double e : result.epoch_errors) {
        CHECK(std::isfinite(e));
    }
}

TEST_CASE("empty dataset and bad configs are rejected")
{
    TrainConfig cfg;
    CHECK_THROWS_AS(cd1_train({}, cfg), std::invalid_argument);
    cfg.minibatch = 0;
    std::vector<std::vector<std::uint8_t>> data(2, kPattern);
    CHECK_THROWS_AS(cd1_train(data, cfg), std::invalid_argument);
}

TEST_CASE("labeled rbm construction")
{
    LabeledDataset ds;
    ds.width = 8;
    ds.height = 8;
    RngStream stream(77, 0);
    for (int k = 0; k < 30; ++k) {
        std::vector<std::uint8_t> image(64);
        for (auto& p : image) {
            p = static_cast<std::uint8_t>(stream.next_bernoulli_half());
        }
        ds.images.push_back(std::move(image));
        ds.labels.push_back(k % 10);
    }
    TrainConfig cfg;
    cfg.n_hidden = 6;
    cfg.epochs = 2;
    cfg.seed = 5;
    const auto result = build_labeled_rbm(ds, 10, cfg);
    CHECK(result.rbm.n_visible == 74); // 64 pixels + 10 label units
    CHECK(result.rbm.n_hidden == 6);
    CHECK(result.rbm.weights.size() == 74u * 6u);

    LabeledDataset unlabeled = ds;
    unlabeled.labels.clear();
    CHECK_THROWS_AS(build_labeled_rbm(unlabeled, 10, cfg), std::invalid_argument);

    LabeledDataset bad = ds;
    bad.labels[0] = 12;
    CHECK_THROWS_AS(build_labeled_rbm(bad, 10, cfg), std::invalid_argument);
}
