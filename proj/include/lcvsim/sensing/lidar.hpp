#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "lcvsim/dynamics/types.hpp"
#include "lcvsim/util/angles.hpp"
#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/kv_file.hpp"
#include "lcvsim/util/rng.hpp"

namespace lcvsim::sensing {

struct LidarParams {
  double max_range = 40.0;  // [m]
  double fov = 2.0944;      // full cone angle [rad] (120 deg, forward)
  double pos_sigma = 0.02;  // per-axis position noise [m]

  void validate() const {
    if (!(max_range > 0.0) || !(fov > 0.0)) {
      throw ConfigError("lidar: range and fov must be positive");
    }
    if (pos_sigma < 0.0) {
      throw ConfigError("lidar: position noise must be non-negative");
    }
  }

  static LidarParams from_section(const KvSection& kv) {
    LidarParams p;
    p.max_range = kv.get_double("lidar_max_range", p.max_range);
    if (kv.has("lidar_fov_deg")) p.fov = deg_to_rad(kv.require_double("lidar_fov_deg"));
    p.pos_sigma = kv.get_double("lidar_pos_sigma", p.pos_sigma);
    p.validate();
    return p;
  }
};

/// One detected object in the ego frame: x forward, y left.
struct LidarObject {
  double x = 0.0;
  double y = 0.0;
  double timestamp = 0.0;
};

/// Close-range object detector: world points inside the forward cone are
/// reported in the ego frame with small position noise, everything else is
/// omitted. Order of the input list is preserved for the survivors.
class LidarModel {
 public:
  LidarModel(const LidarParams& params, std::uint64_t seed)
      : params_(params), rng_(seed) {
    params_.validate();
  }

  std::vector<LidarObject> sample(
      const dynamics::VehicleState& ego,
      std::span<const std::pair<double, double>> world_objects, double t) {
    std::vector<LidarObject> out;
    const double c = std::cos(ego.heading);
    const double n = std::sin(ego.heading);
    for (const auto& [wx, wy] : world_objects) {
      const double dx = wx - ego.x;
      const double dy = wy - ego.y;
      const double x_ego = c * dx + n * dy;
      const double y_ego = -n * dx + c * dy;
      const double distance = std::hypot(x_ego, y_ego);
      if (distance > params_.max_range) continue;
      if (std::abs(std::atan2(y_ego, x_ego)) > params_.fov / 2.0) continue;
      LidarObject obj;
      obj.x = x_ego + params_.pos_sigma * rng_.normal();
      obj.y = y_ego + params_.pos_sigma * rng_.normal();
      obj.timestamp = t;
      out.push_back(obj);
    }
    return out;
  }

 private:
  LidarParams params_;
  Rng rng_;
};

}  // namespace lcvsim::sensing
