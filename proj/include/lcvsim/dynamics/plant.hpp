#pragma once

#include <cmath>
#include <cstddef>

#include "lcvsim/dynamics/forces.hpp"
#include "lcvsim/dynamics/parameters.hpp"
#include "lcvsim/dynamics/tires.hpp"
#include "lcvsim/dynamics/types.hpp"
#include "lcvsim/util/errors.hpp"

namespace lcvsim::dynamics {

/// Torque delivered to the driven axle: engine map torque scaled by the
/// gear ratio and the driveline efficiency.
inline double powertrain_torque(const VehicleParameters& p, double throttle,
                                double engine_speed_rpm, int gear) {
  if (!std::isfinite(throttle) || !std::isfinite(engine_speed_rpm)) {
    throw InputDomainError("powertrain_torque: non-finite input");
  }
  const double ratio = p.gear_ratio(gear);  // throws on invalid gear
  return p.driveline_efficiency * ratio *
         p.engine_map.torque(engine_speed_rpm, throttle);
}

/// Moment balance at the wheel center for a forward-spinning wheel.
/// Brake torque opposite to reverse spin and the cannot-reverse-through-zero
/// clamp are handled by the integrator.
inline double wheel_angular_accel(const VehicleParameters& p, double drive_torque,
                                  double brake_torque, double fx) {
  if (brake_torque < 0.0) {
    throw InputDomainError("wheel_angular_accel: brake torque must be >= 0");
  }
  return (drive_torque - brake_torque - fx * p.wheel_radius) / p.wheel_inertia;
}

/// Time derivative of the full vehicle state:
///   - body-frame longitudinal/lateral/yaw dynamics driven by the Dugoff
///     tire forces, with drag, rolling resistance and the slope force
///     opposing motion along the body x axis,
///   - global-frame kinematics for position and heading,
///   - per-axle wheel spin dynamics, drive torque on the driven axle only.
inline StateDerivative state_derivative(const VehicleState& state,
                                        const PlantInputs& inputs,
                                        const VehicleParameters& p) {
  const SlipState slip = compute_slip(state, inputs, p);
  const auto [fz_front, fz_rear] = normal_loads(p);
  const TireForces tires = dugoff_forces(p, slip, fz_front, fz_rear);
  const ResistiveForces resist = resistive_forces(p, state.speed(), inputs.grade);

  // Drag and rolling resistance oppose the direction of travel; the slope
  // force keeps its own sign. Both vanish from the force balance when the
  // vehicle is (nearly) stationary.
  double direction = 0.0;
  if (state.vx > kVelocityEpsilon) {
    direction = 1.0;
  } else if (state.vx < -kVelocityEpsilon) {
    direction = -1.0;
  }
  const double resist_x = direction * (resist.aero + resist.rolling) + resist.grade;

  const double cos_d = std::cos(inputs.steer_front);
  const double sin_d = std::sin(inputs.steer_front);

  StateDerivative d;
  d.ax = (tires.fx_front * cos_d - tires.fy_front * sin_d + tires.fx_rear -
          resist_x) /
             p.mass +
         state.yaw_rate * state.vy;
  d.ay = (tires.fx_front * sin_d + tires.fy_front * cos_d + tires.fy_rear) /
             p.mass -
         state.yaw_rate * state.vx;
  d.yaw_accel = (p.lf * tires.fy_front * cos_d - p.lr * tires.fy_rear +
                 p.lf * tires.fx_front * sin_d) /
                p.yaw_inertia;

  d.dx = state.vx * std::cos(state.heading) - state.vy * std::sin(state.heading);
  d.dy = state.vx * std::sin(state.heading) + state.vy * std::cos(state.heading);
  d.dheading = state.yaw_rate;

  const bool front_driven = p.driven_axle == DrivenAxle::kFront;
  const double omega_driven = front_driven ? state.omega_front : state.omega_rear;
  const double drive = powertrain_torque(
      p, inputs.throttle, p.engine_rpm(omega_driven, inputs.gear), inputs.gear);

  // Brake torque opposes the current spin direction.
  const double brake_f =
      state.omega_front < 0.0 ? -inputs.brake_front : inputs.brake_front;
  const double brake_r =
      state.omega_rear < 0.0 ? -inputs.brake_rear : inputs.brake_rear;

  d.domega_front = (front_driven ? drive : 0.0) / p.wheel_inertia +
                   (-brake_f - tires.fx_front * p.wheel_radius) / p.wheel_inertia;
  d.domega_rear = (front_driven ? 0.0 : drive) / p.wheel_inertia +
                  (-brake_r - tires.fx_rear * p.wheel_radius) / p.wheel_inertia;
  return d;
}

namespace detail {

inline VehicleState advance(const VehicleState& s, const StateDerivative& d,
                            double h) {
  VehicleState out = s;
  out.x += h * d.dx;
  out.y += h * d.dy;
  out.heading += h * d.dheading;
  out.vx += h * d.ax;
  out.vy += h * d.ay;
  out.yaw_rate += h * d.yaw_accel;
  out.omega_front += h * d.domega_front;
  out.omega_rear += h * d.domega_rear;
  return out;
}

}  // namespace detail

/// One classical 4th-order fixed step with the inputs held constant.
/// Deterministic: identical inputs give bit-identical outputs. Wheels being
/// braked are clamped at zero instead of being spun through it.
inline VehicleState integrate_step(const VehicleState& state,
                                   const PlantInputs& inputs,
                                   const VehicleParameters& p, double dt,
                                   std::size_t step_index = 0) {
  if (!(dt > 0.0 && dt <= 0.01)) {
    throw InputDomainError("integrate_step: dt must lie in (0, 0.01] s");
  }
  const StateDerivative k1 = state_derivative(state, inputs, p);
  const StateDerivative k2 =
      state_derivative(detail::advance(state, k1, 0.5 * dt), inputs, p);
  const StateDerivative k3 =
      state_derivative(detail::advance(state, k2, 0.5 * dt), inputs, p);
  const StateDerivative k4 =
      state_derivative(detail::advance(state, k3, dt), inputs, p);

  VehicleState next = state;
  const double h = dt / 6.0;
  next.x += h * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  next.y += h * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
  next.heading += h * (k1.dheading + 2.0 * k2.dheading + 2.0 * k3.dheading + k4.dheading);
  next.vx += h * (k1.ax + 2.0 * k2.ax + 2.0 * k3.ax + k4.ax);
  next.vy += h * (k1.ay + 2.0 * k2.ay + 2.0 * k3.ay + k4.ay);
  next.yaw_rate += h * (k1.yaw_accel + 2.0 * k2.yaw_accel + 2.0 * k3.yaw_accel + k4.yaw_accel);
  next.omega_front += h * (k1.domega_front + 2.0 * k2.domega_front +
                           2.0 * k3.domega_front + k4.domega_front);
  next.omega_rear += h * (k1.domega_rear + 2.0 * k2.domega_rear +
                          2.0 * k3.domega_rear + k4.domega_rear);

  if (inputs.brake_front > 0.0) {
    if (state.omega_front >= 0.0 && next.omega_front < 0.0) next.omega_front = 0.0;
    if (state.omega_front < 0.0 && next.omega_front > 0.0) next.omega_front = 0.0;
  }
  if (inputs.brake_rear > 0.0) {
    if (state.omega_rear >= 0.0 && next.omega_rear < 0.0) next.omega_rear = 0.0;
    if (state.omega_rear < 0.0 && next.omega_rear > 0.0) next.omega_rear = 0.0;
  }

  if (!next.finite()) {
    throw DivergenceError("integrate_step: non-finite state", step_index);
  }
  return next;
}

}  // namespace lcvsim::dynamics
