#pragma once

#include <cmath>

#include "lcvsim/util/angles.hpp"
#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/kv_file.hpp"
#include "lcvsim/util/rng.hpp"

namespace lcvsim::sensing {

struct CompassParams {
  double bias = 0.01;             // fixed mounting/declination bias [rad]
  double sigma = 0.005;           // per-sample noise [rad]
  double burst_prob = 0.0;        // chance of an interference burst per sample
  double burst_magnitude = 0.3;   // burst amplitude [rad]

  void validate() const {
    if (sigma < 0.0 || burst_magnitude < 0.0) {
      throw ConfigError("compass: noise magnitudes must be non-negative");
    }
    if (burst_prob < 0.0 || burst_prob >= 1.0) {
      throw ConfigError("compass: burst probability must lie in [0, 1)");
    }
  }

  static CompassParams from_section(const KvSection& kv) {
    CompassParams p;
    p.bias = kv.get_double("compass_bias", p.bias);
    p.sigma = kv.get_double("compass_sigma", p.sigma);
    p.burst_prob = kv.get_double("compass_burst_prob", p.burst_prob);
    p.burst_magnitude = kv.get_double("compass_burst_magnitude", p.burst_magnitude);
    p.validate();
    return p;
  }
};

/// Digital compass: true heading plus a fixed bias, white noise, and
/// occasional interference bursts of either sign.
class CompassModel {
 public:
  CompassModel(const CompassParams& params, std::uint64_t seed)
      : params_(params), rng_(seed) {
    params_.validate();
  }

  double sample(double true_heading) {
    double reading = true_heading + params_.bias + params_.sigma * rng_.normal();
    if (params_.burst_prob > 0.0 && rng_.bernoulli(params_.burst_prob)) {
      reading += rng_.bernoulli(0.5) ? params_.burst_magnitude
                                     : -params_.burst_magnitude;
    }
    return wrap_angle(reading);
  }

 private:
  CompassParams params_;
  Rng rng_;
};

struct FusedHeading {
  double heading = 0.0;
  /// Set when the two inputs are antipodal and their mean is undefined; the
  /// GPS heading is passed through in that case.
  bool degenerate = false;
};

/// Averages the compass and GPS headings on the circle: the mean of the two
/// unit vectors, which is wrap-safe where an arithmetic mean is not
/// (350 deg and 10 deg average to 0, not 180).
inline FusedHeading heading_fusion(double compass_heading, double gps_heading) {
  const double sx = std::cos(compass_heading) + std::cos(gps_heading);
  const double sy = std::sin(compass_heading) + std::sin(gps_heading);
  if (std::hypot(sx, sy) < 1e-12) {
    return {wrap_angle(gps_heading), true};
  }
  return {wrap_angle(std::atan2(sy, sx)), false};
}

}  // namespace lcvsim::sensing
