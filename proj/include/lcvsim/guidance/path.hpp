#pragma once

#include <cmath>
#include <fstream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lcvsim/sensing/lidar.hpp"
#include "lcvsim/util/angles.hpp"
#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/kv_file.hpp"
#include "lcvsim/util/pid.hpp"
#include "lcvsim/util/text.hpp"

namespace lcvsim::guidance {

/// Ordered target points in local plane coordinates with the switching
/// radius and the follower's progress through them.
struct WaypointPath {
  std::vector<std::pair<double, double>> points;
  double switch_radius = 3.0;  // [m]
  std::size_t target_index = 0;
  bool complete = false;

  void validate() const {
    if (points.size() < 2) {
      throw ConfigError("waypoint path needs at least two points");
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i] == points[i - 1]) {
        throw ConfigError("waypoint path has identical consecutive points at index " +
                          std::to_string(i));
      }
    }
    if (!(switch_radius > 0.0)) {
      throw ConfigError("waypoint switch radius must be positive");
    }
    if (target_index >= points.size()) {
      throw ConfigError("waypoint target index out of bounds");
    }
  }
};

/// Reads raw coordinate pairs, one per line, delimiter-agnostic. Whether
/// they are local meters or latitude/longitude is decided by the caller.
inline std::vector<std::pair<double, double>> load_waypoint_pairs(
    std::istream& in, const std::string& name = {}) {
  std::vector<std::pair<double, double>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto stripped = strip_comment(line);
    if (stripped.empty()) continue;
    const auto tokens = split_tokens(stripped);
    if (tokens.size() != 2) {
      throw ParseError(name + ": expected two fields per waypoint line", lineno);
    }
    try {
      out.emplace_back(parse_double(tokens[0]), parse_double(tokens[1]));
    } catch (const ParseError&) {
      throw ParseError(name + ": waypoint fields must be numeric", lineno);
    }
  }
  return out;
}

inline std::vector<std::pair<double, double>> load_waypoint_pairs_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open waypoint file: " + path);
  return load_waypoint_pairs(in, path);
}

/// Signed angle from the heading vector to the bearing vector pointing at
/// the target, wrapped to (-pi, pi]. Positive means the target lies to the
/// left (counter-clockwise), matching the plant's yaw convention.
inline double bearing_error(double x, double y, double heading, double tx,
                            double ty) {
  const double dx = tx - x;
  const double dy = ty - y;
  if (std::hypot(dx, dy) < 1e-9) {
    throw DegenerateGeometryError(
        "bearing_error: target coincides with the position");
  }
  return wrap_angle(std::atan2(dy, dx) - heading);
}

/// Advances the target index past every waypoint already inside the switch
/// radius; the final waypoint is held and flags the path complete instead.
/// Returns the updated index.
inline std::size_t select_waypoint(double x, double y, WaypointPath& path) {
  path.validate();
  while (true) {
    const auto& [tx, ty] = path.points[path.target_index];
    if (std::hypot(tx - x, ty - y) >= path.switch_radius) break;
    if (path.target_index + 1 >= path.points.size()) {
      path.complete = true;
      break;
    }
    ++path.target_index;
  }
  return path.target_index;
}

struct PathFollowerGains {
  double kp = 0.8;           // [rad steer per rad bearing error]
  double ki = 0.0;           // [1/s]
  double kd = 0.12;          // [s]
  double steer_limit = 0.6;  // output clamp [rad]

  void validate() const {
    if (kp < 0.0 || ki < 0.0 || kd < 0.0) {
      throw ConfigError("path follower gains must be non-negative");
    }
    if (!(steer_limit > 0.0)) {
      throw ConfigError("path follower steer limit must be positive");
    }
  }

  static PathFollowerGains from_section(const KvSection& kv) {
    PathFollowerGains g;
    g.kp = kv.get_double("path_kp", g.kp);
    g.ki = kv.get_double("path_ki", g.ki);
    g.kd = kv.get_double("path_kd", g.kd);
    g.steer_limit = kv.get_double("steer_limit", g.steer_limit);
    g.validate();
    return g;
  }
};

/// PID that drives the bearing error to zero; output is the desired
/// road-wheel angle handed to the steering servo.
inline double path_follow_pid(double bearing_err, PidState& state,
                              const PathFollowerGains& g, double dt) {
  return pid_step(bearing_err, g.kp, g.ki, g.kd, -g.steer_limit,
                  g.steer_limit, state, dt);
}

/// Geometry and gain of the low-speed obstacle correction.
struct ObstacleConfig {
  double low_speed_threshold = 5.0;  // active below this ego speed [m/s]
  double corridor_length = 8.0;      // forward window [m]
  double corridor_half_width = 1.5;  // lateral window [m]
  double side_length = 2.0;          // window behind the bumper line [m]
  double gain = 0.15;                // correction per meter of intrusion [rad/m]
  double max_correction = 0.3;       // [rad]

  void validate() const {
    if (!(low_speed_threshold >= 0.0)) {
      throw ConfigError("obstacle: speed threshold must be non-negative");
    }
    if (!(corridor_length > 0.0) || !(corridor_half_width > 0.0)) {
      throw ConfigError("obstacle: corridor dimensions must be positive");
    }
    if (side_length < 0.0 || gain < 0.0 || max_correction < 0.0) {
      throw ConfigError("obstacle: gain fields must be non-negative");
    }
  }

  static ObstacleConfig from_section(const KvSection& kv) {
    ObstacleConfig c;
    c.low_speed_threshold = kv.get_double("obstacle_speed_threshold", c.low_speed_threshold);
    c.corridor_length = kv.get_double("obstacle_corridor_length", c.corridor_length);
    c.corridor_half_width = kv.get_double("obstacle_corridor_half_width", c.corridor_half_width);
    c.side_length = kv.get_double("obstacle_side_length", c.side_length);
    c.gain = kv.get_double("obstacle_gain", c.gain);
    c.max_correction = kv.get_double("obstacle_max_correction", c.max_correction);
    c.validate();
    return c;
  }
};

/// Low-speed steering correction away from nearby obstacles: the deepest
/// intruder into the forward corridor (or the zone just beside the bumper)
/// adds a clamped correction angle away from its side. Objects on the
/// centerline steer right. Inactive above the speed threshold.
inline double obstacle_correction(double desired_steer,
                                  std::span<const sensing::LidarObject> objects,
                                  double ego_v, const ObstacleConfig& c) {
  if (ego_v >= c.low_speed_threshold) return desired_steer;

  double worst_intrusion = 0.0;
  double worst_side = 0.0;
  for (const auto& obj : objects) {
    if (obj.x < -c.side_length || obj.x > c.corridor_length) continue;
    const double intrusion = c.corridor_half_width - std::abs(obj.y);
    if (intrusion <= 0.0) continue;
    if (intrusion > worst_intrusion) {
      worst_intrusion = intrusion;
      worst_side = obj.y >= 0.0 ? 1.0 : -1.0;
    }
  }
  if (worst_intrusion == 0.0) return desired_steer;
  const double correction =
      -worst_side * std::min(c.gain * worst_intrusion, c.max_correction);
  return desired_steer + correction;
}

}  // namespace lcvsim::guidance
