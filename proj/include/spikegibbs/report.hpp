#pragma once

#include <span>
#include <string>
#include <vector>

#include "spikegibbs/classify.hpp"
#include "spikegibbs/crossbar.hpp"
#include "spikegibbs/curve.hpp"

namespace spikegibbs {

// Fixed 9-significant-digit formatting shared by every emitted file, so
// replayed runs are byte-identical.
std::string format_number(double x);

std::string curve_csv(const ActivationCurve& curve);
std::string raster_csv(std::span<const SpikeEvent> raster);
std::string kl_csv(std::span<const double> trial_kls);
std::string confusion_csv(const EvalResult& result);
std::string noise_csv(std::span<const NoisePoint> points);

// Standalone SVG line plot, one polyline per curve, axes labeled v and P.
std::string emit_svg(std::span<const ActivationCurve> curves,
                     std::span<const std::string> names);

void write_text_file(const std::string& path, const std::string& content);

} // namespace spikegibbs
