#include "spikegibbs/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace spikegibbs {

std::string format_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string curve_csv(const ActivationCurve& curve)
{
    std::string out = "v,p\n";
    for (const CurvePoint& point : curve.points) {
        out += std::to_string(point.v);
        out += ',';
        out += format_number(point.p);
        out += '\n';
    }
    return out;
}

std::string raster_csv(std::span<const SpikeEvent> raster)
{
    std::string out = "tick,neuron_index\n";
    for (const SpikeEvent& event : raster) {
        out += std::to_string(event.tick);
        out += ',';
        out += std::to_string(event.neuron);
        out += '\n';
    }
    return out;
}

std::string kl_csv(std::span<const double> trial_kls)
{
    std::string out = "trial,kl\n";
    for (std::size_t t = 0; t < trial_kls.size(); ++t) {
        out += std::to_string(t + 1);
        out += ',';
        out += format_number(trial_kls[t]);
        out += '\n';
    }
    return out;
}

std::string confusion_csv(const EvalResult& result)
{
    std::string out = "true_label,predicted_label,count\n";
    for (int i = 0; i < result.n_classes; ++i) {
        for (int j = 0; j < result.n_classes; ++j) {
            out += std::to_string(i);
            out += ',';
            out += std::to_string(j);
            out += ',';
            out += std::to_string(result.at(i, j));
            out += '\n';
        }
    }
    return out;
}

std::string noise_csv(std::span<const NoisePoint> points)
{
    std::string out = "factor,accuracy\n";
    for (const NoisePoint& point : points) {
        out += format_number(point.factor);
        out += ',';
        out += format_number(point.accuracy);
        out += '\n';
    }
    return out;
}

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 56;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 20;
constexpr int kMarginBottom = 44;

const char* kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad",
                          "#d35400", "#2c3e50"};

} // namespace

std::string emit_svg(std::span<const ActivationCurve> curves,
                     std::span<const std::string> names)
{
    if (curves.empty()) {
        throw std::invalid_argument("emit_svg: no curves");
    }
    if (names.size() != curves.size()) {
        throw std::invalid_argument("emit_svg: need one name per curve");
    }
    double v_lo = std::numeric_limits<double>::infinity();
    double v_hi = -std::numeric_limits<double>::infinity();
    for (const ActivationCurve& curve : curves) {
        if (curve.points.empty()) {
            throw std::invalid_argument("emit_svg: empty curve");
        }
        v_lo = std::min(v_lo, static_cast<double>(curve.points.front().v));
        v_hi = std::max(v_hi, static_cast<double>(curve.points.back().v));
    }
    if (v_hi <= v_lo) {
        v_hi = v_lo + 1.0;
    }

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto sx = [&](double v) {
        return kMarginLeft + (v - v_lo) / (v_hi - v_lo) * plot_w;
    };
    const auto sy = [&](double p) { return kMarginTop + (1.0 - p) * plot_h; };

    std::string svg;
    char buf[256];
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
           "viewBox=\"0 0 640 420\">\n";
    svg += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%d\" y1=\"%g\" x2=\"%d\" y2=\"%g\" stroke=\"black\"/>\n",
                  kMarginLeft, sy(0.0), kWidth - kMarginRight, sy(0.0));
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%d\" y1=\"%g\" x2=\"%d\" y2=\"%g\" stroke=\"black\"/>\n",
                  kMarginLeft, sy(0.0), kMarginLeft, sy(1.0));
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%d\" font-size=\"14\" text-anchor=\"middle\">v</text>\n",
                  kMarginLeft + plot_w / 2.0, kHeight - 10);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"16\" y=\"%g\" font-size=\"14\" text-anchor=\"middle\">P</text>\n",
                  kMarginTop + plot_h / 2.0);
    svg += buf;
    // axis range labels
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-size=\"11\" text-anchor=\"middle\">%s</text>\n",
                  kMarginLeft, kHeight - kMarginBottom + 16, format_number(v_lo).c_str());
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-size=\"11\" text-anchor=\"middle\">%s</text>\n",
                  kWidth - kMarginRight, kHeight - kMarginBottom + 16,
                  format_number(v_hi).c_str());
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">0</text>\n",
                  kMarginLeft - 6, sy(0.0) + 4);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">1</text>\n",
                  kMarginLeft - 6, sy(1.0) + 4);
    svg += buf;

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const char* color = kPalette[c % (sizeof kPalette / sizeof kPalette[0])];
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"";
        for (const CurvePoint& point : curves[c].points) {
            std::snprintf(buf, sizeof buf, "%s,%s ", format_number(sx(point.v)).c_str(),
                          format_number(sy(point.p)).c_str());
            svg += buf;
        }
        if (!curves[c].points.empty()) {
            svg.pop_back();
        }
        svg += "\"/>\n";
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%d\" y=\"%d\" width=\"12\" height=\"12\" fill=\"%s\"/>\n",
                      kWidth - 150, kMarginTop + static_cast<int>(c) * 18, color);
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%d\" y=\"%d\" font-size=\"12\">%s</text>\n",
                      kWidth - 132, kMarginTop + static_cast<int>(c) * 18 + 10,
                      names[c].c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << content;
}

} // namespace spikegibbs
