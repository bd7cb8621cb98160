#include "spikegibbs/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spikegibbs {

namespace {

double gaussian(RngStream& stream)
{
    // Box-Muller; the 1 - u flip keeps the log argument in (0, 1]
    const double u1 = 1.0 - stream.next_real01();
    const double u2 = stream.next_real01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double sigmoid(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

} // namespace

void TrainConfig::validate() const
{
    if (n_hidden < 1) {
        throw std::invalid_argument("train: n_hidden must be >= 1");
    }
    if (epochs < 0) {
        throw std::invalid_argument("train: epochs must be >= 0");
    }
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("train: learning_rate must be > 0");
    }
    if (minibatch < 1) {
        throw std::invalid_argument("train: minibatch must be >= 1");
    }
    if (!(weight_init_sigma > 0.0)) {
        throw std::invalid_argument("train: weight_init_sigma must be > 0");
    }
}

TrainResult cd1_train(const std::vector<std::vector<std::uint8_t>>& images,
                      const TrainConfig& cfg)
{
    cfg.validate();
    if (images.empty()) {
        throw std::invalid_argument("train: empty dataset");
    }
    const int n_visible = static_cast<int>(images.front().size());
    for (const auto& image : images) {
        if (static_cast<int>(image.size()) != n_visible) {
            throw std::invalid_argument("train: image sizes differ");
        }
    }

    TrainResult result;
    Rbm& m = result.rbm;
    m.n_visible = n_visible;
    m.n_hidden = cfg.n_hidden;
    m.weights.resize(static_cast<std::size_t>(n_visible) * cfg.n_hidden);
    m.visible_bias.assign(static_cast<std::size_t>(n_visible), 0.0);
    m.hidden_bias.assign(static_cast<std::size_t>(cfg.n_hidden), 0.0);

    RngStream init_stream(cfg.seed, 0);
    for (double& w : m.weights) {
        w = cfg.weight_init_sigma * gaussian(init_stream);
    }

    RngStream train_stream(cfg.seed, 1);
    const std::size_t n = images.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> h0_prob(static_cast<std::size_t>(cfg.n_hidden));
    std::vector<std::uint8_t> h0_sample(static_cast<std::size_t>(cfg.n_hidden));
    std::vector<double> v1_prob(static_cast<std::size_t>(n_visible));
    std::vector<double> h1_prob(static_cast<std::size_t>(cfg.n_hidden));
    std::vector<double> grad_w(m.weights.size());
    std::vector<double> grad_bv(m.visible_bias.size());
    std::vector<double> grad_bh(m.hidden_bias.size());

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[train_stream.next_below(i)]);
        }
        double epoch_error = 0.0;
        std::size_t cursor = 0;
        while (cursor < n) {
            const std::size_t batch_end = std::min(n, cursor + cfg.minibatch);
            const auto batch_size = static_cast<double>(batch_end - cursor);
            std::fill(grad_w.begin(), grad_w.end(), 0.0);
            std::fill(grad_bv.begin(), grad_bv.end(), 0.0);
            std::fill(grad_bh.begin(), grad_bh.end(), 0.0);

            for (std::size_t b = cursor; b < batch_end; ++b) {
                const auto& v0 = images[order[b]];

                for (int j = 0; j < cfg.n_hidden; ++j) {
                    double f = m.hidden_bias[static_cast<std::size_t>(j)];
                    for (int i = 0; i < n_visible; ++i) {
                        if (v0[static_cast<std::size_t>(i)]) {
                            f += m.w(i, j);
                        }
                    }
                    h0_prob[static_cast<std::size_t>(j)] = sigmoid(f);
                    h0_sample[static_cast<std::size_t>(j)] =
                        train_stream.next_real01() < h0_prob[static_cast<std::size_t>(j)] ? 1 : 0;
                }

                for (int i = 0; i < n_visible; ++i) {
                    double f = m.visible_bias[static_cast<std::size_t>(i)];
                    for (int j = 0; j < cfg.n_hidden; ++j) {
                        if (h0_sample[static_cast<std::size_t>(j)]) {
                            f += m.w(i, j);
                        }
                    }
                    v1_prob[static_cast<std::size_t>(i)] = sigmoid(f);
                }

                for (int j = 0; j < cfg.n_hidden; ++j) {
                    double f = m.hidden_bias[static_cast<std::size_t>(j)];
                    for (int i = 0; i < n_visible; ++i) {
                        f += m.w(i, j) * v1_prob[static_cast<std::size_t>(i)];
                    }
                    h1_prob[static_cast<std::size_t>(j)] = sigmoid(f);
                }

                for (int i = 0; i < n_visible; ++i) {
                    const double v0i = v0[static_cast<std::size_t>(i)];
                    const double v1i = v1_prob[static_cast<std::size_t>(i)];
                    grad_bv[static_cast<std::size_t>(i)] += v0i - v1i;
                    epoch_error += std::abs(v0i - v1i);
                    for (int j = 0; j < cfg.n_hidden; ++j) {
                        grad_w[static_cast<std::size_t>(i) * cfg.n_hidden + j] +=
                            v0i * h0_prob[static_cast<std::size_t>(j)] -
                            v1i * h1_prob[static_cast<std::size_t>(j)];
                    }
                }
                for (int j = 0; j < cfg.n_hidden; ++j) {
                    grad_bh[static_cast<std::size_t>(j)] +=
                        h0_prob[static_cast<std::size_t>(j)] -
                        h1_prob[static_cast<std::size_t>(j)];
                }
            }

            const double step = cfg.learning_rate / batch_size;
            for (std::size_t k = 0; k < grad_w.size(); ++k) {
                m.weights[k] += step * grad_w[k];
            }
            for (std::size_t k = 0; k < grad_bv.size(); ++k) {
                m.visible_bias[k] += step * grad_bv[k];
            }
            for (std::size_t k = 0; k < grad_bh.size(); ++k) {
                m.hidden_bias[k] += step * grad_bh[k];
            }
            cursor = batch_end;
        }

        epoch_error /= static_cast<double>(n) * n_visible;
        if (!std::isfinite(epoch_error)) {
            throw std::runtime_error("train: reconstruction error diverged at epoch " +
                                     std::to_string(epoch));
        }
        result.epoch_errors.push_back(epoch_error);
    }
    return result;
}

TrainResult build_labeled_rbm(const LabeledDataset& ds, int n_classes,
                              const TrainConfig& cfg)
{
    ds.validate();
    if (ds.labels.empty()) {
        throw std::invalid_argument("build_labeled_rbm: dataset has no labels");
    }
    if (n_classes < 2) {
        throw std::invalid_argument("build_labeled_rbm: need at least 2 classes");
    }
    for (const int label : ds.labels) {
        if (label < 0 || label >= n_classes) {
            throw std::invalid_argument("build_labeled_rbm: label out of range");
        }
    }
    std::vector<std::vector<std::uint8_t>> vectors;
    vectors.reserve(ds.images.size());
    for (std::size_t k = 0; k < ds.images.size(); ++k) {
        std::vector<std::uint8_t> v = ds.images[k];
        v.resize(v.size() + static_cast<std::size_t>(n_classes), 0);
        v[ds.images[k].size() + static_cast<std::size_t>(ds.labels[k])] = 1;
        vectors.push_back(std::move(v));
    }
    return cd1_train(vectors, cfg);
}

} // namespace spikegibbs
