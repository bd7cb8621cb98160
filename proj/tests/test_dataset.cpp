#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <stdexcept>

#include "spikegibbs/dataset.hpp"

using namespace spikegibbs;

namespace {

// 2 images of 2x2 pixels, hand-assembled
const std::vector<std::uint8_t> kGoldenImages = {
    0x00, 0x00, 0x08, 0x03, // magic
    0x00, 0x00, 0x00, 0x02, // count
    0x00, 0x00, 0x00, 0x02, // rows
    0x00, 0x00, 0x00, 0x02, // cols
    0x00, 0x7f, 0x80, 0xff, // image 0
    0x10, 0x20, 0x30, 0x40, // image 1
};

const std::vector<std::uint8_t> kGoldenLabels = {
    0x00, 0x00, 0x08, 0x01, // magic
    0x00, 0x00, 0x00, 0x03, // count
    0x00, 0x05, 0x09,
};

LabeledDataset square_dataset(int width, int n_images)
{
    LabeledDataset ds;
    ds.width = width;
    ds.height = width;
    for (int k = 0; k < n_images; ++k) {
        ds.images.emplace_back(static_cast<std::size_t>(width) * width, 0);
        ds.labels.push_back(k % 10);
    }
    return ds;
}

} // namespace

TEST_CASE("golden image file parses exactly")
{
    const auto raw = parse_idx_images(kGoldenImages);
    CHECK(raw.count == 2);
    CHECK(raw.rows == 2);
    CHECK(raw.cols == 2);
    REQUIRE(raw.pixels.size() == 8);
    CHECK(raw.pixels[0] == 0x00);
    CHECK(raw.pixels[1] == 0x7f);
    CHECK(raw.pixels[2] == 0x80);
    CHECK(raw.pixels[3] == 0xff);
    CHECK(raw.pixels[7] == 0x40);
}

TEST_CASE("golden label file parses exactly")
{
    const auto labels = parse_idx_labels(kGoldenLabels);
    CHECK(labels == std::vector<std::uint8_t>{0, 5, 9});
}

TEST_CASE("malformed idx input fails with an offset")
{
    SUBCASE("bad magic")
    {
        auto bytes = kGoldenImages;
        bytes[3] = 0x00;
        try {
            parse_idx_images(bytes);
            FAIL("expected a parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("bad magic at offset 0") != std::string::npos);
        }
    }
    SUBCASE("truncated payload")
    {
        auto bytes = kGoldenImages;
        bytes.resize(bytes.size() - 3);
        CHECK_THROWS_WITH_AS(parse_idx_images(bytes), doctest::Contains("truncated"),
                             std::runtime_error);
    }
    SUBCASE("truncated header")
    {
        std::vector<std::uint8_t> bytes(kGoldenImages.begin(), kGoldenImages.begin() + 6);
        CHECK_THROWS_AS(parse_idx_images(bytes), std::runtime_error);
    }
    SUBCASE("trailing garbage")
    {
        auto bytes = kGoldenImages;
        bytes.push_back(0x00);
        CHECK_THROWS_WITH_AS(parse_idx_images(bytes), doctest::Contains("trailing"),
                             std::runtime_error);
    }
    SUBCASE("dim overflow")
    {
        auto bytes = kGoldenImages;
        bytes[4] = 0xff;
        bytes[5] = 0xff;
        bytes[6] = 0xff;
        bytes[7] = 0xff;
        CHECK_THROWS_WITH_AS(parse_idx_images(bytes), doctest::Contains("dim overflow"),
                             std::runtime_error);
    }
    SUBCASE("labels with image magic")
    {
        CHECK_THROWS_WITH_AS(parse_idx_labels(kGoldenImages),
                             doctest::Contains("bad magic at offset 0"), std::runtime_error);
    }
}

TEST_CASE("round trip through the writers is identical")
{
    const auto raw = parse_idx_images(kGoldenImages);
    CHECK(write_idx_images(raw) == kGoldenImages);
    const auto labels = parse_idx_labels(kGoldenLabels);
    CHECK(write_idx_labels(labels) == kGoldenLabels);
}

TEST_CASE("binarize thresholds at 128 by default")
{
    const auto raw = parse_idx_images(kGoldenImages);
    const auto images = binarize(raw);
    REQUIRE(images.size() == 2);
    CHECK(images[0] == std::vector<std::uint8_t>{0, 0, 1, 1}); // 127 -> 0, 128 -> 1
    CHECK(images[1] == std::vector<std::uint8_t>{0, 0, 0, 0});

    // idempotence: re-binarizing the 0/255 rendering changes nothing
    RawImages again;
    again.count = 2;
    again.rows = 2;
    again.cols = 2;
    for (const auto& image : images) {
        for (const std::uint8_t p : image) {
            again.pixels.push_back(p ? 255 : 0);
        }
    }
    CHECK(binarize(again) == images);
}

TEST_CASE("downsample majority vote")
{
    LabeledDataset ds;
    ds.width = 2;
    ds.height = 2;
    ds.labels = {3};
    SUBCASE("factor one is the identity")
    {
        ds.images = {{1, 0, 0, 1}};
        const auto out = downsample(ds, 1);
        CHECK(out.images == ds.images);
    }
    SUBCASE("tie goes to one")
    {
        ds.images = {{1, 1, 0, 0}};
        const auto out = downsample(ds, 2);
        CHECK(out.width == 1);
        CHECK(out.height == 1);
        CHECK(out.images[0] == std::vector<std::uint8_t>{1});
    }
    SUBCASE("all ones stays all ones")
    {
        LabeledDataset big = square_dataset(28, 2);
        for (auto& image : big.images) {
            std::fill(image.begin(), image.end(), std::uint8_t{1});
        }
        const auto out = downsample(big, 2);
        CHECK(out.width == 14);
        CHECK(out.height == 14);
        for (const auto& image : out.images) {
            for (const std::uint8_t p : image) {
                CHECK(p == 1);
            }
        }
    }
    SUBCASE("divisibility is enforced")
    {
        ds.images = {{1, 1, 0, 0}};
        CHECK_THROWS_AS(downsample(ds, 3), std::invalid_argument);
    }
}

TEST_CASE("salt noise")
{
    LabeledDataset ds = square_dataset(10, 3);
    SUBCASE("factor zero is the identity")
    {
        const auto out = add_salt_noise(ds, 0.0, 1);
        CHECK(out.images == ds.images);
        CHECK(out.labels == ds.labels);
        REQUIRE(out.noise.has_value());
        CHECK(out.noise->factor == 0.0);
    }
    SUBCASE("factor one whitens everything")
    {
        const auto out = add_salt_noise(ds, 1.0, 1);
        for (const auto& image : out.images) {
            for (const std::uint8_t p : image) {
                CHECK(p == 1);
            }
        }
    }
    SUBCASE("exact corruption count on a blank image")
    {
        const auto out = add_salt_noise(ds, 0.1, 7);
        for (const auto& image : out.images) {
            int ones = 0;
            for (const std::uint8_t p : image) {
                ones += p;
            }
            CHECK(ones == 10);
        }
    }
    SUBCASE("monotone: set pixels only grow")
    {
        LabeledDataset half = ds;
        for (auto& image : half.images) {
            for (std::size_t k = 0; k < image.size(); k += 3) {
                image[k] = 1;
            }
        }
        const auto out = add_salt_noise(half, 0.25, 3);
        for (std::size_t n = 0; n < half.images.size(); ++n) {
            for (std::size_t k = 0; k < half.images[n].size(); ++k) {
                CHECK(out.images[n][k] >= half.images[n][k]);
            }
        }
    }
}

TEST_CASE("salt and pepper noise")
{
    LabeledDataset ds = square_dataset(10, 2);
    for (auto& image : ds.images) {
        std::fill(image.begin(), image.end(), std::uint8_t{1});
    }
    SUBCASE("identity at zero factor")
    {
        const auto out = add_salt_pepper_noise(ds, 0.0, 5);
        CHECK(out.images == ds.images);
    }
    SUBCASE("corruption count is exact and some pixels flip dark")
    {
        const auto out = add_salt_pepper_noise(ds, 0.5, 5);
        int dark = 0;
        for (const auto& image : out.images) {
            for (const std::uint8_t p : image) {
                dark += p == 0;
            }
        }
        // 50 chosen pixels per 100-pixel image; roughly half turn dark
        CHECK(dark > 20);
        CHECK(dark < 80);
    }
    SUBCASE("fixed seed reproduces the corruption")
    {
        const auto a = add_salt_pepper_noise(ds, 0.3, 9);
        const auto b = add_salt_pepper_noise(ds, 0.3, 9);
        CHECK(a.images == b.images);
    }
    SUBCASE("noise never touches labels or dimensions")
    {
        const auto out = add_salt_pepper_noise(ds, 0.7, 2);
        CHECK(out.labels == ds.labels);
        CHECK(out.width == ds.width);
        CHECK(out.height == ds.height);
        CHECK(out.images.size() == ds.images.size());
    }
    SUBCASE("factor out of range")
    {
        CHECK_THROWS_AS(add_salt_pepper_noise(ds, 1.5, 1), std::invalid_argument);
    }
}

TEST_CASE("binary dataset round-trips through IDX bytes")
{
    LabeledDataset ds = square_dataset(4, 3);
    RngStream stream(8, 0);
    for (auto& image : ds.images) {
        for (auto& p : image) {
            p = static_cast<std::uint8_t>(stream.next_bernoulli_half());
        }
    }
    RawImages raw;
    raw.count = static_cast<std::uint32_t>(ds.size());
    raw.rows = 4;
    raw.cols = 4;
    for (const auto& image : ds.images) {
        for (const std::uint8_t p : image) {
            raw.pixels.push_back(p ? 255 : 0);
        }
    }
    std::vector<std::uint8_t> labels(ds.labels.begin(), ds.labels.end());

    const auto image_bytes = write_idx_images(raw);
    const auto label_bytes = write_idx_labels(labels);
    const auto parsed = make_dataset(parse_idx_images(image_bytes),
                                     parse_idx_labels(label_bytes));
    CHECK(parsed.images == ds.images);
    CHECK(parsed.labels == ds.labels);
}

TEST_CASE("bundled digits dataset loads through the full path")
{
    const std::string dir = std::string(SPIKEGIBBS_DATA_DIR) + "/digits";
    const auto ds = load_dataset(dir + "/train-images-idx3-ubyte.gz",
                                 dir + "/train-labels-idx1-ubyte.gz", 128, 2);
    ds.validate();
    CHECK(ds.width == 14);
    CHECK(ds.height == 14);
    CHECK(ds.size() >= 2000);
    for (const int label : ds.labels) {
        CHECK(label >= 0);
        CHECK(label <= 9);
    }
}
