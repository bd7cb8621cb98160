#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace spikegibbs {

// Membrane and field arithmetic is exact signed 32-bit; anything wider is
// a detected error, never a silent wrap.
inline std::int32_t checked_i32(std::int64_t value, const char* what)
{
    if (value < std::numeric_limits<std::int32_t>::min() ||
        value > std::numeric_limits<std::int32_t>::max()) {
        throw std::range_error(std::string(what) + ": value " + std::to_string(value) +
                               " exceeds signed 32-bit range");
    }
    return static_cast<std::int32_t>(value);
}

// Runs fn(i) for i in [0, n). With threads <= 1 this is a plain loop;
// otherwise indices are split into contiguous chunks, one per worker.
// Results must be written to per-index slots so the outcome is identical
// for any thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

} // namespace spikegibbs
