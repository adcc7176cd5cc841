#pragma once

#include <algorithm>
#include <cmath>

#include "lcvsim/dynamics/parameters.hpp"
#include "lcvsim/dynamics/types.hpp"

namespace lcvsim::dynamics {

namespace detail {

/// Longitudinal slip ratio with the braking/traction denominator split:
/// braking divides by the contact patch speed, traction by the wheel
/// circumferential speed. Zero when both speeds are below the epsilon.
inline double slip_ratio(double wheel_surface_speed, double patch_speed) {
  if (std::max(std::abs(wheel_surface_speed), std::abs(patch_speed)) <
      kVelocityEpsilon) {
    return 0.0;
  }
  double s = 0.0;
  if (wheel_surface_speed < patch_speed) {
    s = (wheel_surface_speed - patch_speed) / patch_speed;  // braking
  } else if (wheel_surface_speed > patch_speed) {
    s = (wheel_surface_speed - patch_speed) / wheel_surface_speed;  // traction
  }
  return std::clamp(s, -1.0, 1.0);
}

}  // namespace detail

/// Slip angles, contact patch speeds and slip ratios for both axles.
/// Below the velocity epsilon all slip quantities are zeroed.
inline SlipState compute_slip(const VehicleState& state, const PlantInputs& inputs,
                              const VehicleParameters& p) {
  SlipState slip;
  const double v_front = state.vy + p.lf * state.yaw_rate;
  const double v_rear = state.vy - p.lr * state.yaw_rate;

  if (state.speed() >= kVelocityEpsilon && std::abs(state.vx) >= kVelocityEpsilon) {
    slip.alpha_front = inputs.steer_front - std::atan(v_front / state.vx);
    slip.alpha_rear = -std::atan(v_rear / state.vx);
  }

  slip.vx_front = std::sqrt(state.vx * state.vx + v_front * v_front) *
                  std::cos(slip.alpha_front);
  slip.vx_rear = std::sqrt(state.vx * state.vx + v_rear * v_rear) *
                 std::cos(slip.alpha_rear);

  slip.slip_front =
      detail::slip_ratio(p.wheel_radius * state.omega_front, slip.vx_front);
  slip.slip_rear =
      detail::slip_ratio(p.wheel_radius * state.omega_rear, slip.vx_rear);
  return slip;
}

namespace detail {

/// Dugoff saturation factor: unity inside the friction circle's half-demand
/// region, then the combined-slip reduction beyond it. Continuous at the
/// branch boundary and monotonically non-increasing in the demand.
inline double dugoff_factor(double demand, double mu_fz) {
  if (demand <= 0.5 * mu_fz) return 1.0;
  const double ratio = mu_fz / (2.0 * demand);
  return (2.0 - ratio) * ratio;
}

}  // namespace detail

/// Dugoff tire forces for both axles given slip state and normal loads.
inline TireForces dugoff_forces(const VehicleParameters& p, const SlipState& slip,
                                double fz_front, double fz_rear) {
  if (!(fz_front > 0.0) || !(fz_rear > 0.0)) {
    throw InputDomainError("dugoff_forces: normal loads must be positive");
  }
  TireForces f;
  f.fz_front = fz_front;
  f.fz_rear = fz_rear;

  const double fx_lin_f = p.cx_front * slip.slip_front;
  const double fy_lin_f = p.cy_front * slip.alpha_front;
  const double fx_lin_r = p.cx_rear * slip.slip_rear;
  const double fy_lin_r = p.cy_rear * slip.alpha_rear;

  f.demand_front = std::hypot(fx_lin_f, fy_lin_f);
  f.demand_rear = std::hypot(fx_lin_r, fy_lin_r);

  f.sat_front = detail::dugoff_factor(f.demand_front, p.friction * fz_front);
  f.sat_rear = detail::dugoff_factor(f.demand_rear, p.friction * fz_rear);

  f.fx_front = f.sat_front * fx_lin_f;
  f.fy_front = f.sat_front * fy_lin_f;
  f.fx_rear = f.sat_rear * fx_lin_r;
  f.fy_rear = f.sat_rear * fy_lin_r;
  return f;
}

}  // namespace lcvsim::dynamics
