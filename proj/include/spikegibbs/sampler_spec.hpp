#pragma once

#include <string>

#include "spikegibbs/rbm.hpp"

namespace spikegibbs {

// Parsed command-line sampler description. Grammar:
//   ideal:<scale>
//   digital:<Tw>,<Vt>,<TM>,<leak>:scale=<s>
// scale is the weight multiplier used when quantizing a real model for
// this sampler.
struct SamplerSpec {
    SamplerKind kind;
    double scale = 1.0;
    std::string canonical; // normalized spelling of the spec string
};

SamplerSpec parse_sampler_spec(const std::string& text);

} // namespace spikegibbs
