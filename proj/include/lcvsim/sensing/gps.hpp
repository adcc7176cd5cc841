#pragma once

#include <algorithm>
#include <cmath>

#include "lcvsim/dynamics/types.hpp"
#include "lcvsim/util/angles.hpp"
#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/kv_file.hpp"
#include "lcvsim/util/rng.hpp"

namespace lcvsim::sensing {

/// One position fix in local plane coordinates.
struct GpsFix {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  double timestamp = 0.0;
  bool valid = false;
};

struct GpsNoiseParams {
  /// Hard cap on the position error magnitude [m]. The stationary
  /// distribution is scaled so its 99% quantile sits at this bound.
  double error_bound = 1.5;
  double correlation_time = 60.0;  // error random-walk time constant [s]
  double heading_sigma = 0.01;     // [rad]
  double speed_sigma = 0.05;       // [m/s]

  void validate() const {
    if (error_bound < 0.0 || heading_sigma < 0.0 || speed_sigma < 0.0) {
      throw ConfigError("gps: noise magnitudes must be non-negative");
    }
    if (!(correlation_time > 0.0)) {
      throw ConfigError("gps: correlation time must be positive");
    }
  }

  static GpsNoiseParams from_section(const KvSection& kv) {
    GpsNoiseParams p;
    p.error_bound = kv.get_double("gps_error_bound", p.error_bound);
    p.correlation_time = kv.get_double("gps_correlation_time", p.correlation_time);
    p.heading_sigma = kv.get_double("gps_heading_sigma", p.heading_sigma);
    p.speed_sigma = kv.get_double("gps_speed_sigma", p.speed_sigma);
    p.validate();
    return p;
  }
};

/// GPS receiver with slowly wandering position error: a first-order
/// Gauss-Markov process per axis, which reproduces the biased-but-repeatable
/// character of real fixes (the error barely moves between nearby samples).
/// The error magnitude is hard-clamped at the configured bound.
class GpsModel {
 public:
  GpsModel(const GpsNoiseParams& params, std::uint64_t seed)
      : params_(params), rng_(seed) {
    params_.validate();
    const double sigma = axis_sigma();
    error_x_ = sigma * rng_.normal();
    error_y_ = sigma * rng_.normal();
  }

  GpsFix sample(const dynamics::VehicleState& truth, double t) {
    if (has_last_ && t < last_t_) {
      throw InputDomainError("gps_model: timestamps must be non-decreasing");
    }
    if (has_last_) {
      const double dt = t - last_t_;
      const double phi = std::exp(-dt / params_.correlation_time);
      const double sigma = axis_sigma();
      const double drive = sigma * std::sqrt(std::max(0.0, 1.0 - phi * phi));
      error_x_ = phi * error_x_ + drive * rng_.normal();
      error_y_ = phi * error_y_ + drive * rng_.normal();
    }
    last_t_ = t;
    has_last_ = true;

    double ex = error_x_;
    double ey = error_y_;
    const double magnitude = std::hypot(ex, ey);
    if (magnitude > params_.error_bound && magnitude > 0.0) {
      const double scale = params_.error_bound / magnitude;
      ex *= scale;
      ey *= scale;
    }

    GpsFix fix;
    fix.x = truth.x + ex;
    fix.y = truth.y + ey;
    fix.heading = wrap_angle(truth.heading + params_.heading_sigma * rng_.normal());
    fix.speed = std::max(0.0, truth.speed() + params_.speed_sigma * rng_.normal());
    fix.timestamp = t;
    fix.valid = true;
    return fix;
  }

 private:
  // 99% quantile of a Rayleigh magnitude with per-axis deviation sigma is
  // sigma * sqrt(-2 ln 0.01); placing that quantile at the bound makes the
  // clamp a rare correction rather than the operating regime.
  double axis_sigma() const {
    return params_.error_bound / std::sqrt(-2.0 * std::log(0.01));
  }

  GpsNoiseParams params_;
  Rng rng_;
  double error_x_ = 0.0;
  double error_y_ = 0.0;
  double last_t_ = 0.0;
  bool has_last_ = false;
};

}  // namespace lcvsim::sensing
