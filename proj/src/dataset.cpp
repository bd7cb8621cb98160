#include "spikegibbs/dataset.hpp"

#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <zlib.h>

#include "spikegibbs/rng.hpp"

namespace spikegibbs {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

[[noreturn]] void parse_fail(const std::string& what, std::size_t offset)
{
    throw std::runtime_error(what + " at offset " + std::to_string(offset));
}

std::uint32_t read_u32_be(std::span<const std::uint8_t> bytes, std::size_t offset,
                          const char* what)
{
    if (offset + 4 > bytes.size()) {
        parse_fail(std::string("truncated ") + what, offset);
    }
    return (static_cast<std::uint32_t>(bytes[offset]) << 24) |
           (static_cast<std::uint32_t>(bytes[offset + 1]) << 16) |
           (static_cast<std::uint32_t>(bytes[offset + 2]) << 8) |
           static_cast<std::uint32_t>(bytes[offset + 3]);
}

void append_u32_be(std::vector<std::uint8_t>& out, std::uint32_t value)
{
    out.push_back(static_cast<std::uint8_t>(value >> 24));
    out.push_back(static_cast<std::uint8_t>(value >> 16));
    out.push_back(static_cast<std::uint8_t>(value >> 8));
    out.push_back(static_cast<std::uint8_t>(value));
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes)
{
    z_stream strm{};
    if (inflateInit2(&strm, 16 + MAX_WBITS) != Z_OK) {
        throw std::runtime_error("gzip: inflateInit failed");
    }
    std::vector<std::uint8_t> out;
    std::uint8_t buffer[1 << 16];
    strm.next_in = const_cast<std::uint8_t*>(bytes.data());
    strm.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        strm.next_out = buffer;
        strm.avail_out = sizeof buffer;
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&strm);
            throw std::runtime_error("gzip: corrupt stream");
        }
        out.insert(out.end(), buffer, buffer + (sizeof buffer - strm.avail_out));
    }
    inflateEnd(&strm);
    return out;
}

} // namespace

RawImages parse_idx_images(std::span<const std::uint8_t> bytes)
{
    const std::uint32_t magic = read_u32_be(bytes, 0, "header");
    if (magic != kImagesMagic) {
        parse_fail("bad magic", 0);
    }
    RawImages out;
    out.count = read_u32_be(bytes, 4, "image count");
    out.rows = read_u32_be(bytes, 8, "row count");
    out.cols = read_u32_be(bytes, 12, "column count");

    const std::uint64_t payload = static_cast<std::uint64_t>(out.count) * out.rows * out.cols;
    if (out.rows == 0 || out.cols == 0 || payload > (std::uint64_t{1} << 31)) {
        parse_fail("dim overflow", 4);
    }
    if (bytes.size() < 16 + payload) {
        parse_fail("truncated payload", bytes.size());
    }
    if (bytes.size() > 16 + payload) {
        parse_fail("trailing bytes after payload", 16 + payload);
    }
    out.pixels.assign(bytes.begin() + 16, bytes.end());
    return out;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes)
{
    const std::uint32_t magic = read_u32_be(bytes, 0, "header");
    if (magic != kLabelsMagic) {
        parse_fail("bad magic", 0);
    }
    const std::uint32_t count = read_u32_be(bytes, 4, "label count");
    if (count > (std::uint32_t{1} << 31)) {
        parse_fail("dim overflow", 4);
    }
    if (bytes.size() < 8 + count) {
        parse_fail("truncated payload", bytes.size());
    }
    if (bytes.size() > 8 + count) {
        parse_fail("trailing bytes after payload", std::size_t{8} + count);
    }
    return {bytes.begin() + 8, bytes.end()};
}

std::vector<std::uint8_t> write_idx_images(const RawImages& images)
{
    if (images.pixels.size() !=
        static_cast<std::size_t>(images.count) * images.rows * images.cols) {
        throw std::invalid_argument("write_idx_images: pixel count does not match dims");
    }
    std::vector<std::uint8_t> out;
    out.reserve(16 + images.pixels.size());
    append_u32_be(out, kImagesMagic);
    append_u32_be(out, images.count);
    append_u32_be(out, images.rows);
    append_u32_be(out, images.cols);
    out.insert(out.end(), images.pixels.begin(), images.pixels.end());
    return out;
}

std::vector<std::uint8_t> write_idx_labels(std::span<const std::uint8_t> labels)
{
    std::vector<std::uint8_t> out;
    out.reserve(8 + labels.size());
    append_u32_be(out, kLabelsMagic);
    append_u32_be(out, static_cast<std::uint32_t>(labels.size()));
    out.insert(out.end(), labels.begin(), labels.end());
    return out;
}

std::vector<std::uint8_t> read_file_maybe_gzip(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) {
        return gunzip(bytes);
    }
    return bytes;
}

void LabeledDataset::validate() const
{
    if (images.size() != labels.size()) {
        throw std::invalid_argument("dataset: image/label counts differ");
    }
    const std::size_t expected = static_cast<std::size_t>(width) * height;
    for (const auto& image : images) {
        if (image.size() != expected) {
            throw std::invalid_argument("dataset: image size does not match width*height");
        }
        for (const std::uint8_t p : image) {
            if (p > 1) {
                throw std::invalid_argument("dataset: non-binary pixel");
            }
        }
    }
}

std::vector<std::vector<std::uint8_t>> binarize(const RawImages& raw, std::uint8_t threshold)
{
    std::vector<std::vector<std::uint8_t>> out;
    out.reserve(raw.count);
    const std::size_t stride = static_cast<std::size_t>(raw.rows) * raw.cols;
    for (std::uint32_t n = 0; n < raw.count; ++n) {
        std::vector<std::uint8_t> image(stride);
        for (std::size_t k = 0; k < stride; ++k) {
            image[k] = raw.pixels[n * stride + k] >= threshold ? 1 : 0;
        }
        out.push_back(std::move(image));
    }
    return out;
}

LabeledDataset make_dataset(const RawImages& raw, std::span<const std::uint8_t> labels,
                            std::uint8_t threshold)
{
    if (labels.size() != raw.count) {
        throw std::invalid_argument("make_dataset: image/label counts differ");
    }
    LabeledDataset ds;
    ds.width = static_cast<int>(raw.cols);
    ds.height = static_cast<int>(raw.rows);
    ds.images = binarize(raw, threshold);
    ds.labels.assign(labels.begin(), labels.end());
    return ds;
}

LabeledDataset downsample(const LabeledDataset& ds, int factor)
{
    if (factor < 1) {
        throw std::invalid_argument("downsample: factor must be >= 1");
    }
    if (factor == 1) {
        return ds;
    }
    if (ds.width % factor != 0 || ds.height % factor != 0) {
        throw std::invalid_argument("downsample: dimensions not divisible by factor");
    }
    LabeledDataset out;
    out.width = ds.width / factor;
    out.height = ds.height / factor;
    out.labels = ds.labels;
    out.noise = ds.noise;
    out.images.reserve(ds.images.size());
    const int votes = factor * factor;
    for (const auto& image : ds.images) {
        std::vector<std::uint8_t> small(static_cast<std::size_t>(out.width) * out.height);
        for (int y = 0; y < out.height; ++y) {
            for (int x = 0; x < out.width; ++x) {
                int ones = 0;
                for (int dy = 0; dy < factor; ++dy) {
                    for (int dx = 0; dx < factor; ++dx) {
                        ones += image[static_cast<std::size_t>(y * factor + dy) * ds.width +
                                      (x * factor + dx)];
                    }
                }
                small[static_cast<std::size_t>(y) * out.width + x] =
                    2 * ones >= votes ? 1 : 0; // tie -> 1
            }
        }
        out.images.push_back(std::move(small));
    }
    return out;
}

namespace {

LabeledDataset corrupt_pixels(const LabeledDataset& ds, double noise_factor,
                              std::uint64_t seed, NoiseProvenance::Kind kind)
{
    if (noise_factor < 0.0 || noise_factor > 1.0) {
        throw std::invalid_argument("noise: factor must be in [0, 1]");
    }
    LabeledDataset out = ds;
    out.noise = NoiseProvenance{kind, noise_factor, seed};
    const std::size_t n_pixels = static_cast<std::size_t>(ds.width) * ds.height;
    const std::size_t n_corrupt =
        static_cast<std::size_t>(noise_factor * static_cast<double>(n_pixels));
    if (n_corrupt == 0) {
        return out;
    }
    std::vector<std::uint32_t> order(n_pixels);
    for (std::size_t image_index = 0; image_index < out.images.size(); ++image_index) {
        RngStream stream(seed, image_index);
        std::iota(order.begin(), order.end(), 0u);
        auto& image = out.images[image_index];
        // partial Fisher-Yates: first n_corrupt entries are a uniform
        // sample without replacement
        for (std::size_t k = 0; k < n_corrupt; ++k) {
            const std::size_t j = k + stream.next_below(n_pixels - k);
            std::swap(order[k], order[j]);
            const std::uint8_t value =
                kind == NoiseProvenance::Kind::salt
                    ? 1
                    : static_cast<std::uint8_t>(stream.next_bernoulli_half());
            image[order[k]] = value;
        }
    }
    return out;
}

} // namespace

LabeledDataset add_salt_noise(const LabeledDataset& ds, double noise_factor,
                              std::uint64_t seed)
{
    return corrupt_pixels(ds, noise_factor, seed, NoiseProvenance::Kind::salt);
}

LabeledDataset add_salt_pepper_noise(const LabeledDataset& ds, double noise_factor,
                                     std::uint64_t seed)
{
    return corrupt_pixels(ds, noise_factor, seed, NoiseProvenance::Kind::salt_pepper);
}

LabeledDataset load_dataset(const std::string& images_path, const std::string& labels_path,
                            std::uint8_t binarize_threshold, int downsample_factor)
{
    const auto image_bytes = read_file_maybe_gzip(images_path);
    const auto label_bytes = read_file_maybe_gzip(labels_path);
    RawImages raw;
    try {
        raw = parse_idx_images(image_bytes);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(images_path + ": " + e.what());
    }
    std::vector<std::uint8_t> labels;
    try {
        labels = parse_idx_labels(label_bytes);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(labels_path + ": " + e.what());
    }
    LabeledDataset ds = make_dataset(raw, labels, binarize_threshold);
    return downsample(ds, downsample_factor);
}

} // namespace spikegibbs
