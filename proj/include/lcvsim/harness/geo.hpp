#pragma once

#include <cmath>
#include <utility>

#include "lcvsim/util/angles.hpp"
#include "lcvsim/util/errors.hpp"

namespace lcvsim::harness {

/// Equirectangular local-tangent-plane projection about a reference point:
/// x east, y north, in meters. Accurate to well under a centimeter over a
/// test-track-sized area, which is all the simulation needs.
class LocalTangentPlane {
 public:
  LocalTangentPlane(double origin_lat_deg, double origin_lon_deg)
      : lat0_(origin_lat_deg), lon0_(origin_lon_deg) {
    if (!(std::abs(origin_lat_deg) <= 89.0)) {
      throw ConfigError("tangent plane origin too close to a pole");
    }
    if (!(std::abs(origin_lon_deg) <= 180.0)) {
      throw ConfigError("tangent plane origin longitude out of range");
    }
    cos_lat0_ = std::cos(deg_to_rad(lat0_));
  }

  std::pair<double, double> to_local(double lat_deg, double lon_deg) const {
    const double x = kEarthRadius * deg_to_rad(lon_deg - lon0_) * cos_lat0_;
    const double y = kEarthRadius * deg_to_rad(lat_deg - lat0_);
    return {x, y};
  }

  std::pair<double, double> to_geodetic(double x, double y) const {
    const double lat = lat0_ + rad_to_deg(y / kEarthRadius);
    const double lon = lon0_ + rad_to_deg(x / (kEarthRadius * cos_lat0_));
    return {lat, lon};
  }

  double origin_lat() const { return lat0_; }
  double origin_lon() const { return lon0_; }

  static constexpr double kEarthRadius = 6371008.8;  // mean radius [m]

 private:
  double lat0_;
  double lon0_;
  double cos_lat0_;
};

}  // namespace lcvsim::harness
