#include "tunelab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace tunelab {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Ticks {
    std::vector<double> at;
    double lo = 0.0;
    double hi = 1.0;
};

/// Round tick positions covering [lo, hi] with a 1/2/5 step.
Ticks nice_ticks(double lo, double hi) {
    if (!(hi > lo)) {
        const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
        lo -= pad;
        hi += pad;
    }
    const double raw_step = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw_step) {
            step = mag * m;
            break;
        }
    }
    Ticks t;
    t.lo = std::floor(lo / step) * step;
    t.hi = std::ceil(hi / step) * step;
    for (double v = t.lo; v <= t.hi + step * 0.5; v += step) t.at.push_back(v);
    return t;
}

class Canvas {
public:
    Canvas(const std::string& title, const std::string& x_label, const std::string& y_label,
           double x_lo, double x_hi, double y_lo, double y_hi)
        : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi) {
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
             << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
        out_ << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
        out_ << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
             << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";
        if (!x_label.empty())
            out_ << "<text x=\"" << (kLeft + plot_width() / 2) << "\" y=\"" << (kHeight - 12)
                 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
                 << escape(x_label) << "</text>\n";
        if (!y_label.empty())
            out_ << "<text x=\"18\" y=\"" << (kTop + plot_height() / 2)
                 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
                 << "transform=\"rotate(-90 18 " << (kTop + plot_height() / 2) << ")\">"
                 << escape(y_label) << "</text>\n";
        out_ << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_width()
             << "\" height=\"" << plot_height() << "\" fill=\"none\" stroke=\"#444\"/>\n";
    }

    static double plot_width() { return kWidth - kLeft - kRight; }
    static double plot_height() { return kHeight - kTop - kBottom; }

    double px(double x) const { return kLeft + (x - x_lo_) / (x_hi_ - x_lo_) * plot_width(); }
    double py(double y) const { return kTop + (y_hi_ - y) / (y_hi_ - y_lo_) * plot_height(); }

    void y_ticks(const Ticks& t) {
        for (const double v : t.at) {
            const double y = py(v);
            out_ << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << (kWidth - kRight)
                 << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
            out_ << "<text x=\"" << (kLeft - 6) << "\" y=\"" << (y + 4)
                 << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v)
                 << "</text>\n";
        }
    }

    void x_ticks(const Ticks& t) {
        for (const double v : t.at) {
            const double x = px(v);
            out_ << "<line x1=\"" << x << "\" y1=\"" << (kHeight - kBottom) << "\" x2=\"" << x
                 << "\" y2=\"" << (kHeight - kBottom + 4) << "\" stroke=\"#444\"/>\n";
            out_ << "<text x=\"" << x << "\" y=\"" << (kHeight - kBottom + 18)
                 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
                 << fmt(v) << "</text>\n";
        }
    }

    void x_category_label(double x, const std::string& label) {
        out_ << "<text x=\"" << x << "\" y=\"" << (kHeight - kBottom + 18)
             << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
             << escape(label) << "</text>\n";
    }

    std::ostringstream& raw() { return out_; }

    std::string finish() {
        out_ << "</svg>\n";
        return out_.str();
    }

private:
    std::ostringstream out_;
    double x_lo_, x_hi_, y_lo_, y_hi_;
};

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<SvgSeries>& series) {
    if (series.empty()) throw std::invalid_argument("line chart needs at least one series");
    double y_lo = series[0].y.minCoeff(), y_hi = series[0].y.maxCoeff();
    Eigen::Index n = series[0].y.size();
    for (const SvgSeries& s : series) {
        if (s.y.size() < 2) throw std::invalid_argument("line chart series needs >= 2 points");
        y_lo = std::min(y_lo, s.y.minCoeff());
        y_hi = std::max(y_hi, s.y.maxCoeff());
        n = std::max(n, s.y.size());
    }
    const Ticks ty = nice_ticks(y_lo, y_hi);
    const Ticks tx = nice_ticks(0.0, static_cast<double>(n - 1));

    Canvas c(title, x_label, y_label, tx.lo, tx.hi, ty.lo, ty.hi);
    c.y_ticks(ty);
    c.x_ticks(tx);
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        c.raw() << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (Eigen::Index i = 0; i < series[s].y.size(); ++i) {
            if (i > 0) c.raw() << ' ';
            c.raw() << c.px(static_cast<double>(i)) << ',' << c.py(series[s].y(i));
        }
        c.raw() << "\"/>\n";
        const double ly = kTop + 16.0 + 16.0 * static_cast<double>(s);
        c.raw() << "<rect x=\"" << (kWidth - kRight - 150) << "\" y=\"" << (ly - 9)
                << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
        c.raw() << "<text x=\"" << (kWidth - kRight - 136) << "\" y=\"" << ly
                << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(series[s].label)
                << "</text>\n";
    }
    return c.finish();
}

std::string render_box_chart(const std::string& title, const std::string& y_label,
                             const std::vector<SvgBox>& boxes) {
    if (boxes.empty()) throw std::invalid_argument("box chart needs at least one box");
    double y_lo = boxes[0].stats.min, y_hi = boxes[0].stats.max;
    for (const SvgBox& b : boxes) {
        y_lo = std::min(y_lo, b.stats.min);
        y_hi = std::max(y_hi, b.stats.max);
    }
    const Ticks ty = nice_ticks(y_lo, y_hi);
    Canvas c(title, "", y_label, 0.0, static_cast<double>(boxes.size()), ty.lo, ty.hi);
    c.y_ticks(ty);

    const double slot = Canvas::plot_width() / static_cast<double>(boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const FiveNumber& s = boxes[i].stats;
        const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
        const double half = std::min(28.0, slot * 0.3);
        const char* color = kPalette[i % kPaletteSize];
        c.raw() << "<g stroke=\"" << color << "\" fill=\"none\">\n";
        c.raw() << "<title>min=" << fmt(s.min) << " q25=" << fmt(s.q25) << " median=" << fmt(s.median)
                << " q75=" << fmt(s.q75) << " max=" << fmt(s.max) << "</title>\n";
        // whiskers
        c.raw() << "<line x1=\"" << cx << "\" y1=\"" << c.py(s.min) << "\" x2=\"" << cx
                << "\" y2=\"" << c.py(s.q25) << "\"/>\n";
        c.raw() << "<line x1=\"" << cx << "\" y1=\"" << c.py(s.q75) << "\" x2=\"" << cx
                << "\" y2=\"" << c.py(s.max) << "\"/>\n";
        c.raw() << "<line x1=\"" << (cx - half * 0.6) << "\" y1=\"" << c.py(s.min) << "\" x2=\""
                << (cx + half * 0.6) << "\" y2=\"" << c.py(s.min) << "\"/>\n";
        c.raw() << "<line x1=\"" << (cx - half * 0.6) << "\" y1=\"" << c.py(s.max) << "\" x2=\""
                << (cx + half * 0.6) << "\" y2=\"" << c.py(s.max) << "\"/>\n";
        // interquartile box and median
        c.raw() << "<rect x=\"" << (cx - half) << "\" y=\"" << c.py(s.q75) << "\" width=\""
                << (2 * half) << "\" height=\"" << (c.py(s.q25) - c.py(s.q75)) << "\"/>\n";
        c.raw() << "<line x1=\"" << (cx - half) << "\" y1=\"" << c.py(s.median) << "\" x2=\""
                << (cx + half) << "\" y2=\"" << c.py(s.median) << "\" stroke-width=\"2\"/>\n";
        c.raw() << "</g>\n";
        c.x_category_label(cx, boxes[i].label);
    }
    return c.finish();
}

std::string render_bar_chart(const std::string& title, const std::string& y_label,
                             const std::vector<SvgBar>& bars) {
    if (bars.empty()) throw std::invalid_argument("bar chart needs at least one bar");
    double y_lo = std::min(0.0, bars[0].value), y_hi = std::max(0.0, bars[0].value);
    for (const SvgBar& b : bars) {
        y_lo = std::min(y_lo, b.value);
        y_hi = std::max(y_hi, b.value);
    }
    const Ticks ty = nice_ticks(y_lo, y_hi);
    Canvas c(title, "", y_label, 0.0, static_cast<double>(bars.size()), ty.lo, ty.hi);
    c.y_ticks(ty);

    const double slot = Canvas::plot_width() / static_cast<double>(bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
        const double half = std::min(36.0, slot * 0.35);
        const double y0 = c.py(std::max(0.0, ty.lo));
        const double y1 = c.py(bars[i].value);
        const char* color = kPalette[i % kPaletteSize];
        c.raw() << "<rect x=\"" << (cx - half) << "\" y=\"" << std::min(y0, y1) << "\" width=\""
                << (2 * half) << "\" height=\"" << std::abs(y0 - y1) << "\" fill=\"" << color
                << "\"/>\n";
        c.raw() << "<text x=\"" << cx << "\" y=\"" << (std::min(y0, y1) - 4)
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
                << fmt(bars[i].value) << "</text>\n";
        c.x_category_label(cx, bars[i].label);
    }
    return c.finish();
}

}  // namespace tunelab
