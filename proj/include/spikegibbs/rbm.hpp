#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "spikegibbs/neuron.hpp"
#include "spikegibbs/rng.hpp"

namespace spikegibbs {

// Real-valued restricted Boltzmann machine. Weights are row-major,
// weights[i * n_hidden + j] connecting visible i to hidden j.
struct Rbm {
    int n_visible = 0;
    int n_hidden = 0;
    std::vector<double> weights;
    std::vector<double> visible_bias;
    std::vector<double> hidden_bias;

    double w(int i, int j) const { return weights[static_cast<std::size_t>(i) * n_hidden + j]; }
    double& w(int i, int j) { return weights[static_cast<std::size_t>(i) * n_hidden + j]; }
    void validate() const;
};

// Integer model as mapped to hardware: entries are round(scale * value)
// clipped to the symmetric signed weight_bits range.
struct QuantizedRbm {
    int n_visible = 0;
    int n_hidden = 0;
    std::vector<std::int32_t> weights;
    std::vector<std::int32_t> visible_bias;
    std::vector<std::int32_t> hidden_bias;
    double scale = 1.0;
    int weight_bits = 9;

    std::int32_t w(int i, int j) const { return weights[static_cast<std::size_t>(i) * n_hidden + j]; }
    void validate() const;
};

struct QuantizeResult {
    QuantizedRbm rbm;
    std::uint64_t clipped = 0; // entries that hit the representable range
};

// Rounding is half away from zero.
QuantizeResult quantize(const Rbm& m, double scale, int weight_bits = 9);

double energy(const Rbm& m, std::span<const std::uint8_t> v, std::span<const std::uint8_t> h);

// Probabilities over all joint states; index packs the visible bits into
// the low positions and the hidden bits above them.
struct JointDistribution {
    int n_visible = 0;
    int n_hidden = 0;
    std::vector<double> probabilities;

    std::size_t n_states() const { return probabilities.size(); }
};

std::size_t pack_state(std::span<const std::uint8_t> v, std::span<const std::uint8_t> h);

// Full enumeration of exp(-E)/Z; n_visible + n_hidden <= 20.
JointDistribution exact_joint_distribution(const Rbm& m);

enum class Direction { visible_to_hidden, hidden_to_visible };

// Integer total input to one target unit: weighted sum over the other
// layer plus the unit's bias.
std::int32_t field(const QuantizedRbm& q, Direction direction,
                   std::span<const std::uint8_t> other_layer, int unit_index);

struct IdealSampler {
    double scale = 1.0;
};
struct DigitalSampler {
    SamplerParams params;
};
using SamplerKind = std::variant<IdealSampler, DigitalSampler>;

// Samples every unit of the target layer independently, one stream per
// unit. Ideal: Bernoulli(sigmoid(field/scale)); digital: one sampling
// window on the integer field.
std::vector<std::uint8_t> sample_layer(const QuantizedRbm& q, Direction direction,
                                       std::span<const std::uint8_t> other_layer,
                                       const SamplerKind& kind,
                                       std::span<RngStream> streams);

// Joint-state counts accumulated over sweeps.
struct StateHistogram {
    int n_visible = 0;
    int n_hidden = 0;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    JointDistribution normalized(double epsilon) const;
};

struct GibbsOptions {
    // Visible units with mask bit 1 stay at their initial value and
    // consume no randomness.
    std::optional<std::vector<std::uint8_t>> clamp_mask;
    // Joint-state counts are recorded when the model has <= 20 units.
    bool record_histogram = true;
    // Called after each full (hidden then visible) sweep.
    std::function<void(std::span<const std::uint8_t>, std::span<const std::uint8_t>)> on_sweep;
};

struct GibbsResult {
    StateHistogram histogram; // empty when not recorded
    std::vector<std::uint8_t> final_visible;
    std::vector<std::uint8_t> final_hidden;
};

// Alternating layer sampling: h ~ p(h|v) then v ~ p(v|h), one histogram
// entry per full sweep; the initial state is not counted. Unit streams are
// (seed, i) for visible i and (seed, n_visible + j) for hidden j.
GibbsResult gibbs_chain(const QuantizedRbm& q, std::vector<std::uint8_t> init_visible,
                        std::uint64_t n_sweeps, const SamplerKind& kind,
                        std::uint64_t seed, const GibbsOptions& options = {});

// KL(exact || smoothed histogram); the histogram is smoothed as
// (count + epsilon) / (total + epsilon * n_states).
double kl_divergence(const JointDistribution& exact, const StateHistogram& histogram,
                     double epsilon);

// KL between two distributions on the same state space.
double kl_divergence(const JointDistribution& p, const JointDistribution& q);

// Feed-forward stack inference: layer k+1 sampled from stack[k] given
// layer k. Unit streams for stage k are offset by the hidden units of the
// stages before it, so a one-element stack matches a direct sample_layer.
std::vector<std::vector<std::uint8_t>> dbn_infer(std::span<const QuantizedRbm> stack,
                                                 std::span<const std::uint8_t> visible,
                                                 const SamplerKind& kind,
                                                 std::uint64_t seed);

// Model serialization. Real models carry {n_visible, n_hidden, W, b_v,
// b_h}; quantized models add {scale, weight_bits}.
nlohmann::json to_json(const Rbm& m);
nlohmann::json to_json(const QuantizedRbm& q);
Rbm rbm_from_json(const nlohmann::json& j);
QuantizedRbm quantized_rbm_from_json(const nlohmann::json& j);
bool is_quantized_model(const nlohmann::json& j);
Rbm load_rbm(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

// The canonical seeded 3-visible / 2-hidden model used by the generative
// evaluation: weights uniform on [-2, 2], biases uniform on [-1, 1], drawn
// row-major from stream (42, 0) and frozen as data/canonical32.json.
Rbm canonical_rbm_3x2();

} // namespace spikegibbs
