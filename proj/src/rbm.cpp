#include "spikegibbs/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "spikegibbs/util.hpp"

namespace spikegibbs {

namespace {

void check_dims(int n_visible, int n_hidden, std::size_t w, std::size_t bv, std::size_t bh,
                const char* what)
{
    if (n_visible < 1 || n_hidden < 1) {
        throw std::invalid_argument(std::string(what) + ": layer sizes must be >= 1");
    }
    if (w != static_cast<std::size_t>(n_visible) * static_cast<std::size_t>(n_hidden) ||
        bv != static_cast<std::size_t>(n_visible) ||
        bh != static_cast<std::size_t>(n_hidden)) {
        throw std::invalid_argument(std::string(what) + ": weight/bias sizes inconsistent");
    }
}

std::int32_t quantize_entry(double value, double scale, std::int32_t limit,
                            std::uint64_t& clipped)
{
    const double scaled = std::round(value * scale); // half away from zero
    if (scaled > limit) {
        ++clipped;
        return limit;
    }
    if (scaled < -limit) {
        ++clipped;
        return -limit;
    }
    return static_cast<std::int32_t>(scaled);
}

} // namespace

void Rbm::validate() const
{
    check_dims(n_visible, n_hidden, weights.size(), visible_bias.size(), hidden_bias.size(),
               "rbm");
    for (const double x : weights) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("rbm: non-finite weight");
        }
    }
    for (const double x : visible_bias) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("rbm: non-finite visible bias");
        }
    }
    for (const double x : hidden_bias) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("rbm: non-finite hidden bias");
        }
    }
}

void QuantizedRbm::validate() const
{
    check_dims(n_visible, n_hidden, weights.size(), visible_bias.size(), hidden_bias.size(),
               "quantized rbm");
    if (!(scale > 0.0)) {
        throw std::invalid_argument("quantized rbm: scale must be > 0");
    }
    if (weight_bits < 2 || weight_bits > 31) {
        throw std::invalid_argument("quantized rbm: weight_bits must be in [2, 31]");
    }
}

QuantizeResult quantize(const Rbm& m, double scale, int weight_bits)
{
    m.validate();
    if (!(scale > 0.0)) {
        throw std::invalid_argument("quantize: scale must be > 0");
    }
    if (weight_bits < 2 || weight_bits > 31) {
        throw std::invalid_argument("quantize: weight_bits must be in [2, 31]");
    }
    const std::int32_t limit = (1 << (weight_bits - 1)) - 1;

    QuantizeResult out;
    out.rbm.n_visible = m.n_visible;
    out.rbm.n_hidden = m.n_hidden;
    out.rbm.scale = scale;
    out.rbm.weight_bits = weight_bits;
    out.rbm.weights.reserve(m.weights.size());
    for (const double x : m.weights) {
        out.rbm.weights.push_back(quantize_entry(x, scale, limit, out.clipped));
    }
    out.rbm.visible_bias.reserve(m.visible_bias.size());
    for (const double x : m.visible_bias) {
        out.rbm.visible_bias.push_back(quantize_entry(x, scale, limit, out.clipped));
    }
    out.rbm.hidden_bias.reserve(m.hidden_bias.size());
    for (const double x : m.hidden_bias) {
        out.rbm.hidden_bias.push_back(quantize_entry(x, scale, limit, out.clipped));
    }
    return out;
}

double energy(const Rbm& m, std::span<const std::uint8_t> v, std::span<const std::uint8_t> h)
{
    m.validate();
    if (v.size() != static_cast<std::size_t>(m.n_visible) ||
        h.size() != static_cast<std::size_t>(m.n_hidden)) {
        throw std::invalid_argument("energy: state dimensions do not match the model");
    }
    double e = 0.0;
    for (int i = 0; i < m.n_visible; ++i) {
        if (!v[static_cast<std::size_t>(i)]) {
            continue;
        }
        e -= m.visible_bias[static_cast<std::size_t>(i)];
        for (int j = 0; j < m.n_hidden; ++j) {
            if (h[static_cast<std::size_t>(j)]) {
                e -= m.w(i, j);
            }
        }
    }
    for (int j = 0; j < m.n_hidden; ++j) {
        if (h[static_cast<std::size_t>(j)]) {
            e -= m.hidden_bias[static_cast<std::size_t>(j)];
        }
    }
    return e;
}

std::size_t pack_state(std::span<const std::uint8_t> v, std::span<const std::uint8_t> h)
{
    std::size_t index = 0;
    for (std::size_t j = h.size(); j-- > 0;) {
        index = (index << 1) | (h[j] ? 1u : 0u);
    }
    for (std::size_t i = v.size(); i-- > 0;) {
        index = (index << 1) | (v[i] ? 1u : 0u);
    }
    return index;
}

JointDistribution exact_joint_distribution(const Rbm& m)
{
    m.validate();
    const int total_units = m.n_visible + m.n_hidden;
    if (total_units > 20) {
        throw std::invalid_argument("exact_joint_distribution: more than 20 units");
    }
    const std::size_t n_states = std::size_t{1} << total_units;

    std::vector<double> neg_energy(n_states);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::uint8_t> v(static_cast<std::size_t>(m.n_visible));
    std::vector<std::uint8_t> h(static_cast<std::size_t>(m.n_hidden));
    for (std::size_t s = 0; s < n_states; ++s) {
        for (int i = 0; i < m.n_visible; ++i) {
            v[static_cast<std::size_t>(i)] = (s >> i) & 1u;
        }
        for (int j = 0; j < m.n_hidden; ++j) {
            h[static_cast<std::size_t>(j)] = (s >> (m.n_visible + j)) & 1u;
        }
        neg_energy[s] = -energy(m, v, h);
        best = std::max(best, neg_energy[s]);
    }

    JointDistribution dist;
    dist.n_visible = m.n_visible;
    dist.n_hidden = m.n_hidden;
    dist.probabilities.resize(n_states);
    double z = 0.0;
    for (std::size_t s = 0; s < n_states; ++s) {
        dist.probabilities[s] = std::exp(neg_energy[s] - best);
        z += dist.probabilities[s];
    }
    for (double& p : dist.probabilities) {
        p /= z;
    }
    return dist;
}

std::int32_t field(const QuantizedRbm& q, Direction direction,
                   std::span<const std::uint8_t> other_layer, int unit_index)
{
    const bool to_hidden = direction == Direction::visible_to_hidden;
    const std::size_t expected =
        static_cast<std::size_t>(to_hidden ? q.n_visible : q.n_hidden);
    const int n_units = to_hidden ? q.n_hidden : q.n_visible;
    if (other_layer.size() != expected) {
        throw std::invalid_argument("field: source layer size does not match the model");
    }
    if (unit_index < 0 || unit_index >= n_units) {
        throw std::invalid_argument("field: unit index out of range");
    }

    std::int64_t total = to_hidden ? q.hidden_bias[static_cast<std::size_t>(unit_index)]
                                   : q.visible_bias[static_cast<std::size_t>(unit_index)];
    if (to_hidden) {
        for (int i = 0; i < q.n_visible; ++i) {
            if (other_layer[static_cast<std::size_t>(i)]) {
                total += q.w(i, unit_index);
            }
        }
    } else {
        for (int j = 0; j < q.n_hidden; ++j) {
            if (other_layer[static_cast<std::size_t>(j)]) {
                total += q.w(unit_index, j);
            }
        }
    }
    return checked_i32(total, "field");
}

std::vector<std::uint8_t> sample_layer(const QuantizedRbm& q, Direction direction,
                                       std::span<const std::uint8_t> other_layer,
                                       const SamplerKind& kind,
                                       std::span<RngStream> streams)
{
    const int n_units =
        direction == Direction::visible_to_hidden ? q.n_hidden : q.n_visible;
    if (streams.size() != static_cast<std::size_t>(n_units)) {
        throw std::invalid_argument("sample_layer: need one stream per target unit");
    }
    std::vector<std::uint8_t> out(static_cast<std::size_t>(n_units));
    for (int u = 0; u < n_units; ++u) {
        const std::int32_t input = field(q, direction, other_layer, u);
        const auto idx = static_cast<std::size_t>(u);
        if (const auto* ideal = std::get_if<IdealSampler>(&kind)) {
            const double p = ideal_activation_probability(input, ideal->scale);
            out[idx] = streams[idx].next_real01() < p ? 1 : 0;
        } else {
            const auto& digital = std::get<DigitalSampler>(kind);
            out[idx] =
                static_cast<std::uint8_t>(sample_unit(input, digital.params, streams[idx]));
        }
    }
    return out;
}

JointDistribution StateHistogram::normalized(double epsilon) const
{
    if (epsilon < 0.0) {
        throw std::invalid_argument("histogram: epsilon must be >= 0");
    }
    JointDistribution dist;
    dist.n_visible = n_visible;
    dist.n_hidden = n_hidden;
    dist.probabilities.resize(counts.size());
    const double denom =
        static_cast<double>(total) + epsilon * static_cast<double>(counts.size());
    for (std::size_t s = 0; s < counts.size(); ++s) {
        dist.probabilities[s] =
            denom > 0.0 ? (static_cast<double>(counts[s]) + epsilon) / denom : 0.0;
    }
    return dist;
}

GibbsResult gibbs_chain(const QuantizedRbm& q, std::vector<std::uint8_t> init_visible,
                        std::uint64_t n_sweeps, const SamplerKind& kind,
                        std::uint64_t seed, const GibbsOptions& options)
{
    q.validate();
    if (n_sweeps < 1) {
        throw std::invalid_argument("gibbs_chain: n_sweeps must be >= 1");
    }
    if (init_visible.size() != static_cast<std::size_t>(q.n_visible)) {
        throw std::invalid_argument("gibbs_chain: initial visible size mismatch");
    }
    if (options.clamp_mask &&
        options.clamp_mask->size() != static_cast<std::size_t>(q.n_visible)) {
        throw std::invalid_argument("gibbs_chain: clamp mask size mismatch");
    }

    std::vector<RngStream> visible_streams;
    visible_streams.reserve(static_cast<std::size_t>(q.n_visible));
    for (int i = 0; i < q.n_visible; ++i) {
        visible_streams.emplace_back(seed, static_cast<std::uint64_t>(i));
    }
    std::vector<RngStream> hidden_streams;
    hidden_streams.reserve(static_cast<std::size_t>(q.n_hidden));
    for (int j = 0; j < q.n_hidden; ++j) {
        hidden_streams.emplace_back(seed, static_cast<std::uint64_t>(q.n_visible + j));
    }

    const bool record =
        options.record_histogram && q.n_visible + q.n_hidden <= 20;
    GibbsResult result;
    if (record) {
        result.histogram.n_visible = q.n_visible;
        result.histogram.n_hidden = q.n_hidden;
        result.histogram.counts.assign(std::size_t{1} << (q.n_visible + q.n_hidden), 0);
    }

    std::vector<std::uint8_t> visible = std::move(init_visible);
    std::vector<std::uint8_t> hidden(static_cast<std::size_t>(q.n_hidden), 0);
    for (std::uint64_t sweep = 0; sweep < n_sweeps; ++sweep) {
        hidden = sample_layer(q, Direction::visible_to_hidden, visible, kind,
                              hidden_streams);
        for (int i = 0; i < q.n_visible; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            if (options.clamp_mask && (*options.clamp_mask)[idx]) {
                continue; // clamped: held fixed, no draw consumed
            }
            const std::int32_t input = field(q, Direction::hidden_to_visible, hidden, i);
            if (const auto* ideal = std::get_if<IdealSampler>(&kind)) {
                const double p = ideal_activation_probability(input, ideal->scale);
                visible[idx] = visible_streams[idx].next_real01() < p ? 1 : 0;
            } else {
                const auto& digital = std::get<DigitalSampler>(kind);
                visible[idx] = static_cast<std::uint8_t>(
                    sample_unit(input, digital.params, visible_streams[idx]));
            }
        }
        if (record) {
            ++result.histogram.counts[pack_state(visible, hidden)];
            ++result.histogram.total;
        }
        if (options.on_sweep) {
            options.on_sweep(visible, hidden);
        }
    }
    result.final_visible = std::move(visible);
    result.final_hidden = std::move(hidden);
    return result;
}

double kl_divergence(const JointDistribution& exact, const StateHistogram& histogram,
                     double epsilon)
{
    if (epsilon < 0.0) {
        throw std::invalid_argument("kl_divergence: epsilon must be >= 0");
    }
    if (exact.probabilities.size() != histogram.counts.size()) {
        throw std::invalid_argument("kl_divergence: state spaces differ");
    }
    return kl_divergence(exact, histogram.normalized(epsilon));
}

double kl_divergence(const JointDistribution& p, const JointDistribution& q)
{
    if (p.probabilities.size() != q.probabilities.size()) {
        throw std::invalid_argument("kl_divergence: state spaces differ");
    }
    double kl = 0.0;
    for (std::size_t s = 0; s < p.probabilities.size(); ++s) {
        const double ps = p.probabilities[s];
        if (ps <= 0.0) {
            continue;
        }
        const double qs = q.probabilities[s];
        if (qs <= 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        kl += ps * std::log(ps / qs);
    }
    return std::max(kl, 0.0);
}

std::vector<std::vector<std::uint8_t>> dbn_infer(std::span<const QuantizedRbm> stack,
                                                 std::span<const std::uint8_t> visible,
                                                 const SamplerKind& kind,
                                                 std::uint64_t seed)
{
    if (stack.empty()) {
        throw std::invalid_argument("dbn_infer: empty stack");
    }
    std::vector<std::vector<std::uint8_t>> layers;
    layers.emplace_back(visible.begin(), visible.end());
    std::uint64_t stream_offset = 0;
    for (const QuantizedRbm& q : stack) {
        q.validate();
        if (layers.back().size() != static_cast<std::size_t>(q.n_visible)) {
            throw std::invalid_argument("dbn_infer: layer dimensions do not chain");
        }
        std::vector<RngStream> streams;
        streams.reserve(static_cast<std::size_t>(q.n_hidden));
        for (int j = 0; j < q.n_hidden; ++j) {
            streams.emplace_back(seed, stream_offset + static_cast<std::uint64_t>(j));
        }
        layers.push_back(
            sample_layer(q, Direction::visible_to_hidden, layers.back(), kind, streams));
        stream_offset += static_cast<std::uint64_t>(q.n_hidden);
    }
    return layers;
}

nlohmann::json to_json(const Rbm& m)
{
    m.validate();
    return nlohmann::json{{"n_visible", m.n_visible},
                          {"n_hidden", m.n_hidden},
                          {"W", m.weights},
                          {"b_v", m.visible_bias},
                          {"b_h", m.hidden_bias}};
}

nlohmann::json to_json(const QuantizedRbm& q)
{
    q.validate();
    return nlohmann::json{{"n_visible", q.n_visible}, {"n_hidden", q.n_hidden},
                          {"W", q.weights},           {"b_v", q.visible_bias},
                          {"b_h", q.hidden_bias},     {"scale", q.scale},
                          {"weight_bits", q.weight_bits}};
}

namespace {

template <typename Model, typename Entry>
Model model_from_json(const nlohmann::json& j, const char* what)
{
    Model m;
    try {
        m.n_visible = j.at("n_visible").get<int>();
        m.n_hidden = j.at("n_hidden").get<int>();
        m.weights = j.at("W").get<std::vector<Entry>>();
        m.visible_bias = j.at("b_v").get<std::vector<Entry>>();
        m.hidden_bias = j.at("b_h").get<std::vector<Entry>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string(what) + ": " + e.what());
    }
    return m;
}

} // namespace

Rbm rbm_from_json(const nlohmann::json& j)
{
    Rbm m = model_from_json<Rbm, double>(j, "malformed model JSON");
    m.validate();
    return m;
}

QuantizedRbm quantized_rbm_from_json(const nlohmann::json& j)
{
    QuantizedRbm q =
        model_from_json<QuantizedRbm, std::int32_t>(j, "malformed quantized model JSON");
    try {
        q.scale = j.at("scale").get<double>();
        q.weight_bits = j.at("weight_bits").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed quantized model JSON: ") + e.what());
    }
    q.validate();
    return q;
}

bool is_quantized_model(const nlohmann::json& j)
{
    return j.contains("scale") && j.contains("weight_bits");
}

Rbm load_rbm(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open model file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed model JSON in " + path + ": " + e.what());
    }
    return rbm_from_json(j);
}

void save_json(const nlohmann::json& j, const std::string& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << j.dump(2) << "\n";
}

Rbm canonical_rbm_3x2()
{
    RngStream stream(42, 0);
    const auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * stream.next_real01();
    };
    Rbm m;
    m.n_visible = 3;
    m.n_hidden = 2;
    m.weights.resize(6);
    for (double& w : m.weights) {
        w = uniform(-2.0, 2.0);
    }
    m.visible_bias.resize(3);
    for (double& b : m.visible_bias) {
        b = uniform(-1.0, 1.0);
    }
    m.hidden_bias.resize(2);
    for (double& b : m.hidden_bias) {
        b = uniform(-1.0, 1.0);
    }
    return m;
}

} // namespace spikegibbs
