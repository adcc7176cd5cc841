#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lcvsim/harness/trace.hpp"
#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/text.hpp"

namespace lcvsim::harness {

/// One laterally constrained stretch of a lane-change course. `width` is the
/// full gate width: while a footprint corner's x lies inside
/// [x_start, x_end], its y must stay within center_y +- width/2.
struct CorridorSection {
  double x_start = 0.0;
  double x_end = 0.0;
  double center_y = 0.0;
  double width = 0.0;
};

/// Cone corridor of a severe lane-change course as piecewise lateral bounds
/// versus longitudinal station. The stretches between sections are
/// transitions with no lateral constraint.
///
/// File format, one section per line:
///   x_start  x_end  center_y  width_scale  width_offset
/// The gate width is width_scale * vehicle_width + width_offset, so one
/// course file serves any vehicle. '#' starts a comment.
class Corridor {
 public:
  Corridor() = default;

  explicit Corridor(std::vector<CorridorSection> sections)
      : sections_(std::move(sections)) {
    validate();
  }

  static Corridor load(std::istream& in, double vehicle_width,
                       const std::string& name = {}) {
    if (!(vehicle_width > 0.0)) {
      throw ConfigError("corridor: vehicle width must be positive");
    }
    std::vector<CorridorSection> sections;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto stripped = strip_comment(line);
      if (stripped.empty()) continue;
      const auto tokens = split_tokens(stripped);
      if (tokens.size() != 5) {
        throw ParseError(name + ": expected 5 fields per corridor section", lineno);
      }
      std::array<double, 5> v{};
      try {
        for (std::size_t i = 0; i < 5; ++i) v[i] = parse_double(tokens[i]);
      } catch (const ParseError&) {
        throw ParseError(name + ": corridor fields must be numeric", lineno);
      }
      sections.push_back(CorridorSection{
          v[0], v[1], v[2], v[3] * vehicle_width + v[4]});
    }
    return Corridor(std::move(sections));
  }

  static Corridor load_file(const std::string& path, double vehicle_width) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open corridor file: " + path);
    return load(in, vehicle_width, path);
  }

  const std::vector<CorridorSection>& sections() const { return sections_; }
  bool empty() const { return sections_.empty(); }

  /// Section covering a given station, or nullptr in a transition.
  const CorridorSection* section_at(double x) const {
    for (const auto& s : sections_) {
      if (x >= s.x_start && x <= s.x_end) return &s;
    }
    return nullptr;
  }

  double course_start() const { return sections_.front().x_start; }
  double course_end() const { return sections_.back().x_end; }

 private:
  void validate() const {
    if (sections_.empty()) throw ConfigError("corridor has no sections");
    for (std::size_t i = 0; i < sections_.size(); ++i) {
      const auto& s = sections_[i];
      if (!(s.x_end > s.x_start)) {
        throw ConfigError("corridor section " + std::to_string(i) +
                          " must have x_end > x_start");
      }
      if (!(s.width > 0.0)) {
        throw ConfigError("corridor section " + std::to_string(i) +
                          " must have positive width");
      }
      if (i > 0 && !(s.x_start >= sections_[i - 1].x_end)) {
        throw ConfigError("corridor sections must be ordered and disjoint");
      }
    }
  }

  std::vector<CorridorSection> sections_;
};

/// Rectangle corners of the vehicle footprint at a pose, CG-centered,
/// counter-clockwise from front-left.
inline std::array<std::pair<double, double>, 4> footprint_corners(
    double x, double y, double heading, double length, double width) {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const double hl = length / 2.0;
  const double hw = width / 2.0;
  const std::array<std::pair<double, double>, 4> local = {{
      {hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}}};
  std::array<std::pair<double, double>, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = {x + c * local[i].first - s * local[i].second,
              y + s * local[i].first + c * local[i].second};
  }
  return out;
}

struct CorridorEvaluation {
  bool pass = true;
  /// Worst lateral protrusion of any footprint corner beyond a gate [m];
  /// zero on a clean run.
  double max_exceedance = 0.0;
  /// Smallest lateral clearance observed inside the gates [m]; +inf when no
  /// sample ever fell inside a constrained section.
  double min_margin = std::numeric_limits<double>::infinity();
  /// Trace rows with at least one corner inside a constrained section.
  std::size_t rows_in_sections = 0;
};

/// Checks the vehicle outline against the corridor at every trace sample:
/// all four corners of the length x width rectangle at the row's pose must
/// stay inside the gate whenever their station lies in a constrained
/// section. Reports the worst exceedance (and the slimmest margin).
inline CorridorEvaluation evaluate_dlc(const Trace& trace,
                                       const Corridor& corridor,
                                       double body_length, double body_width) {
  if (!(body_length > 0.0) || !(body_width > 0.0)) {
    throw InputDomainError("evaluate_dlc: body dimensions must be positive");
  }
  const std::size_t cx = trace.require("x");
  const std::size_t cy = trace.require("y");
  const std::size_t ch = trace.require("heading");

  CorridorEvaluation eval;
  for (std::size_t r = 0; r < trace.rows(); ++r) {
    const auto corners = footprint_corners(trace.at(r, cx), trace.at(r, cy),
                                           trace.at(r, ch), body_length,
                                           body_width);
    bool row_in_section = false;
    for (const auto& [px, py] : corners) {
      const CorridorSection* section = corridor.section_at(px);
      if (section == nullptr) continue;
      row_in_section = true;
      const double clearance =
          section->width / 2.0 - std::abs(py - section->center_y);
      eval.min_margin = std::min(eval.min_margin, clearance);
      if (clearance < 0.0) {
        eval.max_exceedance = std::max(eval.max_exceedance, -clearance);
      }
    }
    if (row_in_section) ++eval.rows_in_sections;
  }
  eval.pass = eval.max_exceedance == 0.0;
  return eval;
}

}  // namespace lcvsim::harness
