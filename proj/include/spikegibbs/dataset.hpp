#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spikegibbs {

// Decoded IDX image tensor, pixels row-major per image.
struct RawImages {
    std::uint32_t count = 0;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::uint8_t> pixels;
};

// IDX format: big-endian magic (0x00000803 images / 0x00000801 labels),
// big-endian dimension sizes, unsigned byte payload. Malformed input
// raises std::runtime_error naming the byte offset.
RawImages parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> write_idx_images(const RawImages& images);
std::vector<std::uint8_t> write_idx_labels(std::span<const std::uint8_t> labels);

// Whole file, gunzipped first when it starts with the gzip magic 0x1f8b.
std::vector<std::uint8_t> read_file_maybe_gzip(const std::string& path);

struct NoiseProvenance {
    enum class Kind { salt, salt_pepper };
    Kind kind = Kind::salt;
    double factor = 0.0;
    std::uint64_t seed = 0;
};

struct LabeledDataset {
    std::vector<std::vector<std::uint8_t>> images; // binary pixels, row-major
    int width = 0;
    int height = 0;
    std::vector<int> labels;
    std::optional<NoiseProvenance> noise;

    std::size_t size() const { return images.size(); }
    int n_pixels() const { return width * height; }
    void validate() const;
};

// pixel -> 1 iff raw >= threshold.
std::vector<std::vector<std::uint8_t>> binarize(const RawImages& raw,
                                                std::uint8_t threshold = 128);

LabeledDataset make_dataset(const RawImages& raw, std::span<const std::uint8_t> labels,
                            std::uint8_t threshold = 128);

// factor x factor block majority vote, ties to 1. Width and height must be
// divisible by the factor.
LabeledDataset downsample(const LabeledDataset& ds, int factor);

// Sets floor(noise_factor * n_pixels) distinct, uniformly chosen pixels
// per image to 1. Pixel choices use stream (seed, image index).
LabeledDataset add_salt_noise(const LabeledDataset& ds, double noise_factor,
                              std::uint64_t seed);

// Same pixel choice; each chosen pixel is set to 1 or 0 with equal
// probability.
LabeledDataset add_salt_pepper_noise(const LabeledDataset& ds, double noise_factor,
                                     std::uint64_t seed);

// Convenience: parse image + label files, binarize, optionally downsample.
LabeledDataset load_dataset(const std::string& images_path, const std::string& labels_path,
                            std::uint8_t binarize_threshold = 128, int downsample_factor = 1);

} // namespace spikegibbs
