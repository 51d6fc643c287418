#include "sugarbait/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace sugarbait {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

double nice_step(double span, int target_ticks)
{
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double step = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
    return step * mag;
}

} // namespace

std::string render_svg(const LineChart& chart)
{
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    auto fy = [&](double y) { return chart.log_y ? std::log10(std::max(y, 1e-300)) : y; };
    for (const auto& s : chart.series) {
        for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i]) || (chart.log_y && s.ys[i] <= 0))
                continue;
            x_lo = std::min(x_lo, s.xs[i]);
            x_hi = std::max(x_hi, s.xs[i]);
            y_lo = std::min(y_lo, fy(s.ys[i]));
            y_hi = std::max(y_hi, fy(s.ys[i]));
        }
    }
    if (chart.reference_y) {
        y_lo = std::min(y_lo, fy(*chart.reference_y));
        y_hi = std::max(y_hi, fy(*chart.reference_y));
    }
    if (!std::isfinite(x_lo)) {
        x_lo = 0.0;
        x_hi = 1.0;
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if (x_hi == x_lo)
        x_hi = x_lo + 1.0;
    if (y_hi == y_lo)
        y_hi = y_lo + 1.0;
    if (!chart.log_y && y_lo > 0.0 && y_lo < 0.25 * y_hi)
        y_lo = 0.0;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return kTop + (1.0 - (fy(y) - y_lo) / (y_hi - y_lo)) * plot_h; };
    auto py_raw = [&](double v) { return kTop + (1.0 - (v - y_lo) / (y_hi - y_lo)) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\" font-family=\"sans-serif\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << escape(chart.title) << "</text>\n";

    // axes and ticks
    svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w) << "\" height=\""
        << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    const double xs = nice_step(x_hi - x_lo, 6);
    for (double t = std::ceil(x_lo / xs) * xs; t <= x_hi + 1e-9 * xs; t += xs) {
        svg << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(px(t)) << "\" y2=\""
            << num(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(px(t)) << "\" y=\"" << num(kTop + plot_h + 20)
            << "\" text-anchor=\"middle\" font-size=\"12\">" << tick_label(std::abs(t) < 1e-12 * xs ? 0.0 : t)
            << "</text>\n";
    }
    const double ys = nice_step(y_hi - y_lo, 6);
    for (double t = std::ceil(y_lo / ys) * ys; t <= y_hi + 1e-9 * ys; t += ys) {
        const double label = chart.log_y ? std::pow(10.0, t) : (std::abs(t) < 1e-12 * ys ? 0.0 : t);
        svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py_raw(t)) << "\" x2=\"" << num(kLeft) << "\" y2=\""
            << num(py_raw(t)) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py_raw(t) + 4)
            << "\" text-anchor=\"end\" font-size=\"12\">" << tick_label(label) << "</text>\n";
    }
    svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 15)
        << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(chart.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
        << num(kTop + plot_h / 2) << ")\">" << escape(chart.y_label) << "</text>\n";

    if (chart.reference_y) {
        svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(*chart.reference_y)) << "\" x2=\""
            << num(kLeft + plot_w) << "\" y2=\"" << num(py(*chart.reference_y))
            << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
    }

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const auto& s = chart.series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\""
            << (s.dashed ? " stroke-dasharray=\"5 3\"" : "") << " points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
            if (!std::isfinite(s.ys[i]) || (chart.log_y && s.ys[i] <= 0))
                continue;
            svg << (first ? "" : " ") << num(px(s.xs[i])) << ',' << num(py(s.ys[i]));
            first = false;
        }
        svg << "\"/>\n";
        const double ly = kTop + 16.0 + 20.0 * static_cast<double>(k);
        svg << "<line x1=\"" << num(kLeft + plot_w + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kLeft + plot_w + 36)
            << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
            << (s.dashed ? " stroke-dasharray=\"5 3\"" : "") << "/>\n";
        svg << "<text x=\"" << num(kLeft + plot_w + 42) << "\" y=\"" << num(ly + 4) << "\" font-size=\"12\">"
            << escape(s.label) << "</text>\n";
    }

    for (const auto& [mx, my] : chart.markers) {
        if (mx < x_lo || mx > x_hi)
            continue;
        svg << "<circle cx=\"" << num(px(mx)) << "\" cy=\"" << num(py(my)) << "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace sugarbait
