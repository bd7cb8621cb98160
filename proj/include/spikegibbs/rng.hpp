#pragma once

#include <cstdint>

namespace spikegibbs {

// Deterministic, seedable random stream. The generator is xoshiro256++
// with its state derived from (master_seed, stream_id) through SplitMix64,
// so the same pair reproduces the same sequence on any platform and
// distinct stream ids give practically independent sequences.
//
// A stream is owned by one consumer at a time; handing it to another
// thread is fine, concurrent draws on one stream are not.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    // 0 or 1 with probability 0.5 each.
    int next_bernoulli_half();

    // Uniform integer on [0, 2^bits - 1], bits in [1, 31].
    std::int32_t next_uniform_bits(int bits);

    // Uniform double in [0, 1), 53 significant bits.
    double next_real01();

    // Uniform integer on [0, n), n >= 1.
    std::uint64_t next_below(std::uint64_t n);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Number of raw 64-bit words consumed so far. Every draw above
    // consumes exactly one word, which makes randomness budgets checkable.
    std::uint64_t raw_draws() const { return raw_draws_; }

private:
    std::uint64_t state_[4];
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t raw_draws_ = 0;
};

inline RngStream make_stream(std::uint64_t master_seed, std::uint64_t stream_id)
{
    return RngStream(master_seed, stream_id);
}

// Pure hash of (master_seed, index) into a fresh 64-bit seed. This is the
// documented derivation for nested experiments: one sub-seed per image,
// per trial, per noise level, each then feeding per-unit stream ids.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

} // namespace spikegibbs
