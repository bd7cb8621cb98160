#include "spikegibbs/sampler_spec.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace spikegibbs {

namespace {

[[noreturn]] void bad_spec(const std::string& text, const std::string& why)
{
    throw std::invalid_argument("bad sampler spec '" + text + "': " + why);
}

long long parse_int(std::string_view token, const std::string& text)
{
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(token.begin(), token.end(), value);
    if (ec != std::errc{} || ptr != token.end() || token.empty()) {
        bad_spec(text, "'" + std::string(token) + "' is not an integer");
    }
    return value;
}

double parse_real(std::string_view token, const std::string& text)
{
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.begin(), token.end(), value);
    if (ec != std::errc{} || ptr != token.end() || token.empty()) {
        bad_spec(text, "'" + std::string(token) + "' is not a number");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string format_real(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

} // namespace

SamplerSpec parse_sampler_spec(const std::string& text)
{
    const auto parts = split(text, ':');
    SamplerSpec spec;
    if (parts.size() == 2 && parts[0] == "ideal") {
        const double scale = parse_real(parts[1], text);
        if (!(scale > 0.0)) {
            bad_spec(text, "scale must be > 0");
        }
        spec.kind = IdealSampler{scale};
        spec.scale = scale;
        spec.canonical = "ideal:" + format_real(scale);
        return spec;
    }
    if (parts.size() == 3 && parts[0] == "digital") {
        const auto numbers = split(parts[1], ',');
        if (numbers.size() != 4) {
            bad_spec(text, "expected <Tw>,<Vt>,<TM>,<leak>");
        }
        if (!parts[2].starts_with("scale=")) {
            bad_spec(text, "expected trailing scale=<s>");
        }
        SamplerParams params;
        params.window_steps = static_cast<int>(parse_int(numbers[0], text));
        params.threshold = static_cast<std::int32_t>(parse_int(numbers[1], text));
        params.noise_bits = static_cast<int>(parse_int(numbers[2], text));
        params.leak = static_cast<std::int32_t>(parse_int(numbers[3], text));
        params.scale = parse_real(parts[2].substr(6), text);
        try {
            params.validate();
        } catch (const std::invalid_argument& e) {
            bad_spec(text, e.what());
        }
        spec.kind = DigitalSampler{params};
        spec.scale = params.scale;
        spec.canonical = "digital:" + std::to_string(params.window_steps) + "," +
                         std::to_string(params.threshold) + "," +
                         std::to_string(params.noise_bits) + "," +
                         std::to_string(params.leak) +
                         ":scale=" + format_real(params.scale);
        return spec;
    }
    bad_spec(text, "expected ideal:<scale> or digital:<Tw>,<Vt>,<TM>,<leak>:scale=<s>");
}

} // namespace spikegibbs
