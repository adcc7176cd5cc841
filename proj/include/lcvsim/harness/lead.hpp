#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/kv_file.hpp"
#include "lcvsim/util/text.hpp"

namespace lcvsim::harness {

/// Piecewise-linear value versus time. Between knots the value ramps
/// linearly (constant slope); beyond the last knot it holds. Values are
/// non-negative by default (speeds); signed series (e.g. a replayed steering
/// schedule) opt out of that check.
class SpeedProfile {
 public:
  SpeedProfile() = default;

  explicit SpeedProfile(std::vector<std::pair<double, double>> knots,
                        bool allow_negative = false)
      : knots_(std::move(knots)) {
    if (knots_.empty()) throw ConfigError("speed profile needs at least one knot");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
      if (!allow_negative && knots_[i].second < 0.0) {
        throw ConfigError("speed profile speeds must be non-negative");
      }
      if (i > 0 && !(knots_[i].first > knots_[i - 1].first)) {
        throw ConfigError("speed profile times must be strictly increasing");
      }
    }
  }

  /// Parses "t0:v0, t1:v1, ..." as written in scenario files.
  static SpeedProfile parse(std::string_view text, bool allow_negative = false) {
    std::vector<std::pair<double, double>> knots;
    for (const auto& token : split_tokens(text)) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        throw ConfigError("speed profile entries must look like 'time:speed'");
      }
      try {
        knots.emplace_back(parse_double(trim(token.substr(0, colon))),
                           parse_double(trim(token.substr(colon + 1))));
      } catch (const ParseError&) {
        throw ConfigError("speed profile entries must be numeric");
      }
    }
    return SpeedProfile(std::move(knots), allow_negative);
  }

  double speed(double t) const {
    if (t <= knots_.front().first) return knots_.front().second;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      if (t <= knots_[i].first) {
        const auto& [t0, v0] = knots_[i - 1];
        const auto& [t1, v1] = knots_[i];
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
      }
    }
    return knots_.back().second;
  }

  /// Slope of the active ramp; zero on the holds and exactly zero beyond
  /// the final knot.
  double accel(double t) const {
    if (t < knots_.front().first) return 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      if (t <= knots_[i].first) {
        const auto& [t0, v0] = knots_[i - 1];
        const auto& [t1, v1] = knots_[i];
        return (v1 - v0) / (t1 - t0);
      }
    }
    return 0.0;
  }

  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_;
};

/// The lead vehicle as guidance sees it: a point following a straight line
/// at the profiled speed. Position integrates the piecewise-linear profile
/// in closed form, so stepping and evaluating are exactly consistent.
class KinematicLead {
 public:
  KinematicLead(SpeedProfile profile, double x0, double y0, double heading)
      : profile_(std::move(profile)), x0_(x0), y0_(y0), heading_(heading) {}

  double distance_travelled(double t) const {
    const auto& knots = profile_.knots();
    double s = 0.0;
    double prev_t = 0.0;
    double prev_v = profile_.speed(0.0);
    for (const auto& [tk, vk] : knots) {
      if (tk <= 0.0) continue;
      const double end = std::min(t, tk);
      if (end > prev_t) s += 0.5 * (prev_v + profile_.speed(end)) * (end - prev_t);
      if (t <= tk) return s;
      prev_t = tk;
      prev_v = vk;
    }
    if (t > prev_t) s += profile_.speed(t) * (t - prev_t);
    return s;
  }

  double x(double t) const { return x0_ + distance_travelled(t) * std::cos(heading_); }
  double y(double t) const { return y0_ + distance_travelled(t) * std::sin(heading_); }
  double speed(double t) const { return profile_.speed(t); }
  double accel(double t) const { return profile_.accel(t); }
  double heading() const { return heading_; }

 private:
  SpeedProfile profile_;
  double x0_;
  double y0_;
  double heading_;
};

}  // namespace lcvsim::harness
