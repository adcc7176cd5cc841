#pragma once

#include <cmath>

#include "lcvsim/dynamics/types.hpp"
#include "lcvsim/util/angles.hpp"
#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/kv_file.hpp"
#include "lcvsim/util/rng.hpp"

namespace lcvsim::sensing {

struct RadarParams {
  double range_sigma = 0.1;       // [m]
  double rate_sigma = 0.1;        // [m/s]
  double fov = 0.5236;            // full cone angle [rad] (30 deg)
  double max_range = 150.0;       // [m]
  double ego_half_length = 2.5;   // antenna to ego front bumper [m]
  double lead_half_length = 2.5;  // lead reference point to rear bumper [m]

  void validate() const {
    if (range_sigma < 0.0 || rate_sigma < 0.0) {
      throw ConfigError("radar: noise magnitudes must be non-negative");
    }
    if (!(fov > 0.0) || !(max_range > 0.0)) {
      throw ConfigError("radar: fov and max range must be positive");
    }
    if (ego_half_length < 0.0 || lead_half_length < 0.0) {
      throw ConfigError("radar: bumper offsets must be non-negative");
    }
  }

  static RadarParams from_section(const KvSection& kv) {
    RadarParams p;
    p.range_sigma = kv.get_double("radar_range_sigma", p.range_sigma);
    p.rate_sigma = kv.get_double("radar_rate_sigma", p.rate_sigma);
    if (kv.has("radar_fov_deg")) p.fov = deg_to_rad(kv.require_double("radar_fov_deg"));
    p.max_range = kv.get_double("radar_max_range", p.max_range);
    p.ego_half_length = kv.get_double("radar_ego_half_length", p.ego_half_length);
    p.lead_half_length = kv.get_double("radar_lead_half_length", p.lead_half_length);
    p.validate();
    return p;
  }
};

struct RadarTrack {
  double range = 0.0;       // bumper-to-bumper [m]
  double range_rate = 0.0;  // d(range)/dt, negative while closing [m/s]
  bool valid = false;
  double timestamp = 0.0;
};

/// Velocity of a vehicle state in world coordinates.
inline std::pair<double, double> world_velocity(const dynamics::VehicleState& s) {
  const double c = std::cos(s.heading);
  const double n = std::sin(s.heading);
  return {s.vx * c - s.vy * n, s.vx * n + s.vy * c};
}

/// Forward radar tracking a single lead vehicle: bumper-to-bumper range and
/// the closing rate projected on the ego heading, both with additive noise.
/// The track is invalid when the lead sits outside the field of view or the
/// maximum range.
class RadarModel {
 public:
  RadarModel(const RadarParams& params, std::uint64_t seed)
      : params_(params), rng_(seed) {
    params_.validate();
  }

  RadarTrack sample(const dynamics::VehicleState& ego,
                    const dynamics::VehicleState& lead, double t) {
    RadarTrack track;
    track.timestamp = t;

    const double dx = lead.x - ego.x;
    const double dy = lead.y - ego.y;
    const double center_distance = std::hypot(dx, dy);
    const double base_range =
        center_distance - params_.ego_half_length - params_.lead_half_length;
    if (base_range <= 0.0) return track;

    const double bearing = wrap_angle(std::atan2(dy, dx) - ego.heading);
    if (std::abs(bearing) > params_.fov / 2.0) return track;
    if (base_range > params_.max_range) return track;

    const auto [evx, evy] = world_velocity(ego);
    const auto [lvx, lvy] = world_velocity(lead);
    const double hx = std::cos(ego.heading);
    const double hy = std::sin(ego.heading);
    const double base_rate = (lvx - evx) * hx + (lvy - evy) * hy;

    track.range =
        std::max(1e-2, base_range + params_.range_sigma * rng_.normal());
    track.range_rate = base_rate + params_.rate_sigma * rng_.normal();
    track.valid = true;
    return track;
  }

 private:
  RadarParams params_;
  Rng rng_;
};

}  // namespace lcvsim::sensing
