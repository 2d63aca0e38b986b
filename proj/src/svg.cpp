#include "hm/error.hpp"
#include "hm/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <locale>
#include <sstream>

namespace hm::harness {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string short_number(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 3);
    return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;

    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
    double transform(double v) const { return log ? std::log10(v) : v; }
    double inverse(double u) const { return log ? std::pow(10.0, u) : u; }
};

Axis fit_axis(const SvgPlot& plot, bool is_x) {
    Axis axis;
    axis.log = is_x ? plot.log_x : plot.log_y;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : plot.series) {
        const auto& values = is_x ? s.x : s.y;
        for (double v : values) {
            if (axis.usable(v)) {
                lo = std::min(lo, axis.transform(v));
                hi = std::max(hi, axis.transform(v));
            }
        }
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-300) {
        const double pad = std::max(std::abs(lo) * 0.05, 0.5);
        lo -= pad;
        hi += pad;
    }
    axis.lo = lo;
    axis.hi = hi;
    return axis;
}

}  // namespace

std::string render_svg(const SvgPlot& plot) {
    const Axis ax = fit_axis(plot, true);
    const Axis ay = fit_axis(plot, false);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (ax.transform(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
    auto py = [&](double v) {
        return kTop + ph - (ay.transform(v) - ay.lo) / (ay.hi - ay.lo) * ph;
    };

    std::ostringstream svg;
    svg.imbue(std::locale::classic());
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(plot.title) << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = static_cast<double>(i) / kTicks;
        const double ux = ax.lo + fx * (ax.hi - ax.lo);
        const double uy = ay.lo + fx * (ay.hi - ay.lo);
        const double x = kLeft + fx * pw;
        const double y = kTop + ph - fx * ph;
        svg << "<line x1=\"" << x << "\" y1=\"" << kTop + ph << "\" x2=\"" << x << "\" y2=\""
            << kTop + ph + 4 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
            << short_number(ax.inverse(ux)) << "</text>\n";
        svg << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\""
            << y << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
            << short_number(ay.inverse(uy)) << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16
        << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
    svg << "<text transform=\"translate(16," << kTop + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(plot.y_label) << "</text>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* color = kPalette[k % kPalette.size()];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (ax.usable(s.x[i]) && ay.usable(s.y[i])) {
                svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
            }
        }
        svg << "\"/>\n";
        const double ly = kTop + 12 + 16 * static_cast<double>(k);
        svg << "<line x1=\"" << kLeft + pw + 10 << "\" y1=\"" << ly << "\" x2=\""
            << kLeft + pw + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kLeft + pw + 34 << "\" y=\"" << ly + 4 << "\">" << escape(s.name)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_svg(const SvgPlot& plot, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw Error(Errc::ConfigError, "cannot open output file " + path.string());
    }
    file << render_svg(plot);
}

}  // namespace hm::harness
