#pragma once

#include <cmath>
#include <utility>

#include "lcvsim/dynamics/parameters.hpp"
#include "lcvsim/dynamics/types.hpp"
#include "lcvsim/util/errors.hpp"

namespace lcvsim::dynamics {

/// Aerodynamic drag, rolling resistance and gravitational slope force at a
/// given total speed and road inclination. Drag and rolling resistance are
/// returned as magnitudes; the slope term is signed with the inclination.
/// Rolling resistance vanishes below the velocity epsilon: a stationary
/// vehicle has none.
inline ResistiveForces resistive_forces(const VehicleParameters& p, double speed,
                                        double grade) {
  if (!std::isfinite(speed) || !std::isfinite(grade)) {
    throw InputDomainError("resistive_forces: non-finite input");
  }
  if (speed < 0.0) {
    throw InputDomainError("resistive_forces: speed must be non-negative");
  }
  if (!(std::abs(grade) < std::numbers::pi / 2.0)) {
    throw InputDomainError("resistive_forces: |grade| must be below pi/2");
  }
  ResistiveForces f;
  f.aero = 0.5 * p.frontal_area * p.air_density * p.drag_coeff * speed * speed;
  f.rolling = speed < kVelocityEpsilon
                  ? 0.0
                  : p.rolling_coeff * p.mass * p.gravity * std::cos(grade);
  f.grade = p.mass * p.gravity * std::sin(grade);
  return f;
}

/// Static front/rear axle loads from the moment balance about each axle.
/// They always sum to the vehicle weight.
inline std::pair<double, double> normal_loads(const VehicleParameters& p) {
  const double weight = p.mass * p.gravity;
  const double wheelbase = p.wheelbase();
  return {weight * p.lr / wheelbase, weight * p.lf / wheelbase};
}

}  // namespace lcvsim::dynamics
