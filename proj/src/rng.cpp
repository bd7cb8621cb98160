#include "spikegibbs/rng.hpp"

#include <stdexcept>

namespace spikegibbs {

namespace {

inline std::uint64_t rotl64(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

inline std::uint64_t splitmix64(std::uint64_t& x)
{
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id)
{
    std::uint64_t a = master_seed;
    std::uint64_t b = stream_id * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL;
    for (int i = 0; i < 4; ++i) {
        state_[i] = splitmix64(a) ^ splitmix64(b);
    }
    // xoshiro forbids the all-zero state
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
        state_[0] = 0x9E3779B97F4A7C15ULL;
    }
}

std::uint64_t RngStream::next_u64()
{
    const std::uint64_t result = rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl64(state_[3], 45);
    ++raw_draws_;
    return result;
}

int RngStream::next_bernoulli_half()
{
    return static_cast<int>(next_u64() >> 63);
}

std::int32_t RngStream::next_uniform_bits(int bits)
{
    if (bits < 1 || bits > 31) {
        throw std::invalid_argument("next_uniform_bits: bit width must be in [1, 31]");
    }
    return static_cast<std::int32_t>(next_u64() >> (64 - bits));
}

double RngStream::next_real01()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t n)
{
    if (n == 0) {
        throw std::invalid_argument("next_below: bound must be >= 1");
    }
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    return static_cast<std::uint64_t>(wide >> 64);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index)
{
    std::uint64_t x = master_seed ^ (index * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL);
    std::uint64_t first = splitmix64(x);
    return first ^ splitmix64(x);
}

} // namespace spikegibbs
