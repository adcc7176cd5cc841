#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/text.hpp"

namespace lcvsim::harness {

/// One curve of a plot. Non-finite samples split the line into separate
/// strokes, which lets columns use NaN as "no value here" (e.g. corridor
/// bounds outside the constrained sections).
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;
  bool dashed = false;
  /// Draw small direction arrows along the curve (trajectory plots).
  bool arrows = false;
};

/// Deterministic 2-D line plot writer. Everything — layout, tick placement,
/// number formatting — is a pure function of the data, so the same input
/// renders byte-identical SVG on every platform.
class LinePlot {
 public:
  LinePlot(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)),
        x_label_(std::move(x_label)),
        y_label_(std::move(y_label)) {}

  PlotSeries& add_series(std::string label, std::vector<double> x,
                         std::vector<double> y) {
    if (x.size() != y.size()) {
      throw InputDomainError("plot series needs equally long x and y");
    }
    PlotSeries s;
    s.label = std::move(label);
    s.x = std::move(x);
    s.y = std::move(y);
    s.color = kPalette[series_.size() % kPalette.size()];
    series_.push_back(std::move(s));
    return series_.back();
  }

  /// Same pixels per unit on both axes; for trajectory maps.
  void equal_aspect(bool on) { equal_aspect_ = on; }

  void render(std::ostream& os) const {
    Range rx = data_range(true);
    Range ry = data_range(false);
    pad(rx);
    pad(ry);
    if (equal_aspect_) equalize(rx, ry);

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
       << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
       << kHeight << "\">\n";
    os << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" fill=\"#ffffff\"/>\n";

    draw_grid(os, rx, ry);
    for (const auto& s : series_) draw_series(os, s, rx, ry);
    draw_frame(os);
    draw_labels(os);
    draw_legend(os);
    os << "</svg>\n";
  }

  void render_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw InputDomainError("cannot open for writing: " + path);
    render(os);
  }

 private:
  struct Range {
    double lo = 0.0;
    double hi = 1.0;
  };

  static constexpr int kWidth = 880;
  static constexpr int kHeight = 520;
  static constexpr int kMarginLeft = 72;
  static constexpr int kMarginRight = 24;
  static constexpr int kMarginTop = 44;
  static constexpr int kMarginBottom = 56;
  static constexpr int kPlotW = kWidth - kMarginLeft - kMarginRight;
  static constexpr int kPlotH = kHeight - kMarginTop - kMarginBottom;
  static constexpr std::array<const char*, 6> kPalette = {
      "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  Range data_range(bool x_axis) const {
    Range r{std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};
    for (const auto& s : series_) {
      const auto& v = x_axis ? s.x : s.y;
      for (const double value : v) {
        if (!std::isfinite(value)) continue;
        r.lo = std::min(r.lo, value);
        r.hi = std::max(r.hi, value);
      }
    }
    if (!(r.lo <= r.hi)) return Range{0.0, 1.0};
    return r;
  }

  static void pad(Range& r) {
    double span = r.hi - r.lo;
    if (span <= 0.0) span = std::max(1.0, std::abs(r.lo));
    r.lo -= 0.05 * span;
    r.hi += 0.05 * span;
  }

  static void equalize(Range& rx, Range& ry) {
    const double sx = (rx.hi - rx.lo) / kPlotW;
    const double sy = (ry.hi - ry.lo) / kPlotH;
    const double scale = std::max(sx, sy);
    const double cx = (rx.lo + rx.hi) / 2.0;
    const double cy = (ry.lo + ry.hi) / 2.0;
    rx = {cx - scale * kPlotW / 2.0, cx + scale * kPlotW / 2.0};
    ry = {cy - scale * kPlotH / 2.0, cy + scale * kPlotH / 2.0};
  }

  static double px(double x, const Range& r) {
    return kMarginLeft + (x - r.lo) / (r.hi - r.lo) * kPlotW;
  }

  static double py(double y, const Range& r) {
    return kMarginTop + (r.hi - y) / (r.hi - r.lo) * kPlotH;
  }

  /// Pixel coordinates rounded to 1/100 so the emitted text is compact and
  /// platform-stable.
  static std::string fmt(double v) {
    return format_double(std::round(v * 100.0) / 100.0);
  }

  static std::string tick_label(double v) {
    // Snap near-zero ticks so 1e-17 noise does not print as such.
    if (std::abs(v) < 1e-12) v = 0.0;
    return format_double_digits(v, 6);
  }

  static double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step = 10.0;
    if (norm <= 1.0) {
      step = 1.0;
    } else if (norm <= 2.0) {
      step = 2.0;
    } else if (norm <= 5.0) {
      step = 5.0;
    }
    return step * mag;
  }

  static std::vector<double> ticks(const Range& r, int target) {
    const double step = nice_step(r.hi - r.lo, target);
    std::vector<double> out;
    double v = std::ceil(r.lo / step) * step;
    while (v <= r.hi + step * 1e-9) {
      out.push_back(v);
      v += step;
    }
    return out;
  }

  void draw_grid(std::ostream& os, const Range& rx, const Range& ry) const {
    for (const double t : ticks(rx, 8)) {
      const std::string x = fmt(px(t, rx));
      os << "<line x1=\"" << x << "\" y1=\"" << kMarginTop << "\" x2=\"" << x
         << "\" y2=\"" << kMarginTop + kPlotH
         << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
      os << "<text x=\"" << x << "\" y=\"" << kMarginTop + kPlotH + 18
         << "\" font-family=\"Helvetica, Arial, sans-serif\" font-size=\"12\""
            " text-anchor=\"middle\" fill=\"#333333\">"
         << tick_label(t) << "</text>\n";
    }
    for (const double t : ticks(ry, 6)) {
      const std::string y = fmt(py(t, ry));
      os << "<line x1=\"" << kMarginLeft << "\" y1=\"" << y << "\" x2=\""
         << kMarginLeft + kPlotW << "\" y2=\"" << y
         << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
      os << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << y
         << "\" font-family=\"Helvetica, Arial, sans-serif\" font-size=\"12\""
            " text-anchor=\"end\" dominant-baseline=\"middle\" fill=\"#333333\">"
         << tick_label(t) << "</text>\n";
    }
  }

  void draw_series(std::ostream& os, const PlotSeries& s, const Range& rx,
                   const Range& ry) const {
    // Split into strokes at non-finite samples.
    std::vector<std::pair<std::size_t, std::size_t>> strokes;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= s.x.size(); ++i) {
      const bool finite = i < s.x.size() && std::isfinite(s.x[i]) &&
                          std::isfinite(s.y[i]);
      if (!finite) {
        if (i > begin) strokes.emplace_back(begin, i);
        begin = i + 1;
      }
    }
    for (const auto& [from, to] : strokes) {
      if (to - from < 2) continue;
      os << "<polyline fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1.5\"";
      if (s.dashed) os << " stroke-dasharray=\"6 4\"";
      os << " points=\"";
      for (std::size_t i = from; i < to; ++i) {
        if (i > from) os << ' ';
        os << fmt(px(s.x[i], rx)) << ',' << fmt(py(s.y[i], ry));
      }
      os << "\"/>\n";
    }
    if (s.arrows) draw_arrows(os, s, rx, ry);
  }

  void draw_arrows(std::ostream& os, const PlotSeries& s, const Range& rx,
                   const Range& ry) const {
    const std::size_t n = s.x.size();
    if (n < 2) return;
    for (const double f : {0.25, 0.5, 0.75}) {
      const std::size_t i =
          std::min(n - 2, static_cast<std::size_t>(f * static_cast<double>(n)));
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) ||
          !std::isfinite(s.x[i + 1]) || !std::isfinite(s.y[i + 1])) {
        continue;
      }
      const double x0 = px(s.x[i], rx), y0 = py(s.y[i], ry);
      const double x1 = px(s.x[i + 1], rx), y1 = py(s.y[i + 1], ry);
      const double len = std::hypot(x1 - x0, y1 - y0);
      if (len < 1e-9) continue;
      const double ux = (x1 - x0) / len, uy = (y1 - y0) / len;
      // Arrowhead: tip at the sample, barbs 8 px back and 3 px out.
      const double tip_x = x0, tip_y = y0;
      const double bx = tip_x - 8.0 * ux, by = tip_y - 8.0 * uy;
      os << "<polygon fill=\"" << s.color << "\" points=\"" << fmt(tip_x)
         << ',' << fmt(tip_y) << ' ' << fmt(bx - 3.0 * uy) << ','
         << fmt(by + 3.0 * ux) << ' ' << fmt(bx + 3.0 * uy) << ','
         << fmt(by - 3.0 * ux) << "\"/>\n";
    }
  }

  void draw_frame(std::ostream& os) const {
    os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop
       << "\" width=\"" << kPlotW << "\" height=\"" << kPlotH
       << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  }

  void draw_labels(std::ostream& os) const {
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\""
          " font-family=\"Helvetica, Arial, sans-serif\" font-size=\"16\""
          " text-anchor=\"middle\" fill=\"#111111\">"
       << title_ << "</text>\n";
    os << "<text x=\"" << kMarginLeft + kPlotW / 2 << "\" y=\""
       << kHeight - 12
       << "\" font-family=\"Helvetica, Arial, sans-serif\" font-size=\"13\""
          " text-anchor=\"middle\" fill=\"#333333\">"
       << x_label_ << "</text>\n";
    os << "<text x=\"18\" y=\"" << kMarginTop + kPlotH / 2
       << "\" font-family=\"Helvetica, Arial, sans-serif\" font-size=\"13\""
          " text-anchor=\"middle\" fill=\"#333333\""
          " transform=\"rotate(-90 18 "
       << kMarginTop + kPlotH / 2 << ")\">" << y_label_ << "</text>\n";
  }

  void draw_legend(std::ostream& os) const {
    int row = 0;
    for (const auto& s : series_) {
      if (s.label.empty()) continue;
      const int y = kMarginTop + 14 + 18 * row;
      const int x = kMarginLeft + kPlotW - 150;
      os << "<line x1=\"" << x << "\" y1=\"" << y - 4 << "\" x2=\"" << x + 22
         << "\" y2=\"" << y - 4 << "\" stroke=\"" << s.color
         << "\" stroke-width=\"2\"";
      if (s.dashed) os << " stroke-dasharray=\"6 4\"";
      os << "/>\n";
      os << "<text x=\"" << x + 28 << "\" y=\"" << y
         << "\" font-family=\"Helvetica, Arial, sans-serif\" font-size=\"12\""
            " fill=\"#333333\">"
         << s.label << "</text>\n";
      ++row;
    }
  }

  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<PlotSeries> series_;
  bool equal_aspect_ = false;
};

}  // namespace lcvsim::harness
