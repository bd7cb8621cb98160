#pragma once

#include "spikegibbs/neuron.hpp"

namespace spikegibbs::presets {

// Bundled digital-sampler parameterizations P1..P7, ordered roughly by
// window length and resolution. scale is the weight multiplier each set
// was tuned for.
inline SamplerParams p1() { return {1, -130, 8, 0, 50.0}; }
inline SamplerParams p2() { return {1, -80, 8, 102, 50.0}; }
inline SamplerParams p3() { return {1, -20, 8, 200, 75.0}; }
inline SamplerParams p4() { return {1, -100, 9, 300, 120.0}; }
inline SamplerParams p5() { return {16, 50, 9, 15, 30.0}; }
inline SamplerParams p6() { return {16, 100, 10, 30, 50.0}; }
inline SamplerParams p7() { return {16, 633, 8, 90, 100.0}; }

} // namespace spikegibbs::presets
