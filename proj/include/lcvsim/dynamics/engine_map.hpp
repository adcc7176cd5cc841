#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/text.hpp"

namespace lcvsim::dynamics {

/// Static engine torque map T(engine speed, throttle) on a rectangular grid
/// with bilinear interpolation and edge clamping.
///
/// File format: the first data row lists the throttle breakpoints; every
/// following row is an engine speed in rpm followed by one torque value per
/// throttle breakpoint. '#' starts a comment.
class EngineMap {
 public:
  EngineMap() = default;

  EngineMap(std::vector<double> rpm_breaks, std::vector<double> throttle_breaks,
            std::vector<std::vector<double>> torque)
      : rpm_(std::move(rpm_breaks)),
        throttle_(std::move(throttle_breaks)),
        torque_(std::move(torque)) {
    validate();
  }

  static EngineMap load(std::istream& in, const std::string& name = {}) {
    std::vector<double> throttle;
    std::vector<double> rpm;
    std::vector<std::vector<double>> torque;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto stripped = strip_comment(line);
      if (stripped.empty()) continue;
      std::vector<double> row;
      try {
        for (const auto& tok : split_tokens(stripped)) row.push_back(parse_double(tok));
      } catch (const ParseError& e) {
        throw ParseError(name + ": " + e.what(), lineno);
      }
      if (throttle.empty()) {
        throttle = std::move(row);
      } else {
        if (row.size() != throttle.size() + 1) {
          throw ParseError(name + ": expected rpm plus " +
                               std::to_string(throttle.size()) + " torque values",
                           lineno);
        }
        rpm.push_back(row.front());
        torque.emplace_back(row.begin() + 1, row.end());
      }
    }
    EngineMap map(std::move(rpm), std::move(throttle), std::move(torque));
    return map;
  }

  static EngineMap load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open engine map: " + path);
    return load(in, path);
  }

  /// Interpolated engine torque [N m]. Queries outside the grid clamp to
  /// the nearest edge.
  double torque(double rpm, double throttle) const {
    const auto [i, u] = locate(rpm_, rpm);
    const auto [j, v] = locate(throttle_, throttle);
    const double t00 = torque_[i][j];
    const double t10 = torque_[i + 1][j];
    const double t01 = torque_[i][j + 1];
    const double t11 = torque_[i + 1][j + 1];
    return (1.0 - u) * ((1.0 - v) * t00 + v * t01) +
           u * ((1.0 - v) * t10 + v * t11);
  }

  double min_rpm() const { return rpm_.front(); }
  double max_rpm() const { return rpm_.back(); }
  double max_throttle() const { return throttle_.back(); }
  bool empty() const { return rpm_.empty(); }

 private:
  void validate() const {
    if (rpm_.size() < 2 || throttle_.size() < 2) {
      throw ConfigError("engine map needs at least a 2x2 grid");
    }
    for (std::size_t i = 1; i < rpm_.size(); ++i) {
      if (!(rpm_[i] > rpm_[i - 1])) {
        throw ConfigError("engine map rpm breakpoints must be strictly increasing");
      }
    }
    for (std::size_t j = 1; j < throttle_.size(); ++j) {
      if (!(throttle_[j] > throttle_[j - 1])) {
        throw ConfigError("engine map throttle breakpoints must be strictly increasing");
      }
    }
    if (torque_.size() != rpm_.size()) {
      throw ConfigError("engine map row count does not match rpm breakpoints");
    }
  }

  /// Lower cell index and fractional position, clamped to the grid.
  static std::pair<std::size_t, double> locate(const std::vector<double>& breaks,
                                               double value) {
    if (value <= breaks.front()) return {0, 0.0};
    if (value >= breaks.back()) return {breaks.size() - 2, 1.0};
    std::size_t i = 0;
    while (value >= breaks[i + 1]) ++i;
    const double u = (value - breaks[i]) / (breaks[i + 1] - breaks[i]);
    return {i, u};
  }

  std::vector<double> rpm_;
  std::vector<double> throttle_;
  std::vector<std::vector<double>> torque_;
};

}  // namespace lcvsim::dynamics
