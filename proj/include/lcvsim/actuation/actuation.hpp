#pragma once

#include <algorithm>
#include <cmath>

#include "lcvsim/dynamics/forces.hpp"
#include "lcvsim/dynamics/plant.hpp"
#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/kv_file.hpp"
#include "lcvsim/util/pid.hpp"

namespace lcvsim::actuation {

enum class Authority { kAutomated, kDriverOverride };

/// By-wire layer configuration: the brake duty map, the steering position
/// servo and the steering column response. The engine map itself lives with
/// the plant parameters; the throttle channel inverts it numerically.
struct ActuationConfig {
  double brake_duty_slope = 20.0;     // k_b [% per m/s^2 of deceleration]
  double brake_duty_offset = 0.0;     // b_b [%]
  double max_brake_torque = 4200.0;   // total at 100% duty [N m]
  double accel_deadband = 0.05;       // coast window [m/s^2]
  double steer_kp = 9.0;              // servo PI, motor command per rad
  double steer_ki = 150.0;
  double steer_command_limit = 1.0;   // normalized motor command bound
  double steer_rate_limit = 0.9;      // road-wheel slew [rad/s]
  double steer_angle_limit = 0.6;     // road-wheel travel [rad]
  double steer_time_constant = 0.08;  // column lag [s]
  double steering_ratio = 917.0;      // steering-wheel deg per road-wheel rad

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string("actuation: ") + name +
                          " must be strictly positive");
      }
    };
    if (brake_duty_slope < 0.0 || brake_duty_offset < 0.0) {
      throw ConfigError("actuation: brake duty map must be non-negative");
    }
    positive(max_brake_torque, "max_brake_torque");
    if (accel_deadband < 0.0) {
      throw ConfigError("actuation: accel_deadband must be non-negative");
    }
    if (steer_kp < 0.0 || steer_ki < 0.0) {
      throw ConfigError("actuation: steering gains must be non-negative");
    }
    positive(steer_command_limit, "steer_command_limit");
    positive(steer_rate_limit, "steer_rate_limit");
    positive(steer_angle_limit, "steer_angle_limit");
    positive(steer_time_constant, "steer_time_constant");
    positive(steering_ratio, "steering_ratio");
  }

  static ActuationConfig from_section(const KvSection& kv) {
    ActuationConfig c;
    c.brake_duty_slope = kv.get_double("brake_duty_slope", c.brake_duty_slope);
    c.brake_duty_offset = kv.get_double("brake_duty_offset", c.brake_duty_offset);
    c.max_brake_torque = kv.get_double("max_brake_torque", c.max_brake_torque);
    c.accel_deadband = kv.get_double("accel_deadband", c.accel_deadband);
    c.steer_kp = kv.get_double("steer_kp", c.steer_kp);
    c.steer_ki = kv.get_double("steer_ki", c.steer_ki);
    c.steer_command_limit = kv.get_double("steer_command_limit", c.steer_command_limit);
    c.steer_rate_limit = kv.get_double("steer_rate_limit", c.steer_rate_limit);
    c.steer_angle_limit = kv.get_double("steer_angle_limit", c.steer_angle_limit);
    c.steer_time_constant = kv.get_double("steer_time_constant", c.steer_time_constant);
    c.steering_ratio = kv.get_double("steering_ratio", c.steering_ratio);
    c.validate();
    return c;
  }
};

/// What the by-wire layer hands to the plant each control period. Throttle
/// and brake are mutually exclusive by construction.
struct ControlCommand {
  double throttle = 0.0;       // alpha in [0, 1]
  double brake_duty = 0.0;     // PWM duty in [0, 100] %
  double steer_motor = 0.0;    // normalized motor command in [-1, 1]
  Authority authority = Authority::kAutomated;
};

/// Brake torque (total, both axles) commanded by a given PWM duty cycle.
inline double brake_torque_from_duty(const ActuationConfig& c, double duty) {
  return std::clamp(duty, 0.0, 100.0) / 100.0 * c.max_brake_torque;
}

namespace detail {

/// Wheel force produced by a throttle setting at the current driven-axle
/// speed and gear.
inline double wheel_force_at_throttle(const dynamics::VehicleParameters& p,
                                      double throttle, double rpm, int gear) {
  return dynamics::powertrain_torque(p, throttle, rpm, gear) / p.wheel_radius;
}

}  // namespace detail

/// Maps a desired longitudinal acceleration to pedal-level commands:
/// throttle by numerically inverting the engine torque map (smallest throttle
/// whose wheel force covers the demanded inertial force plus the current
/// resistive forces), brake by the affine duty map. A small deadband around
/// zero coasts instead of chattering between the two. Any positive driver
/// pedal takes authority away from the automation and zeroes its outputs.
inline ControlCommand longitudinal_actuation(
    double a_desired, const dynamics::VehicleState& state,
    const dynamics::VehicleParameters& p, const ActuationConfig& c,
    double driver_pedal, double grade = 0.0) {
  if (!std::isfinite(a_desired)) {
    throw InputDomainError("longitudinal_actuation: non-finite acceleration");
  }
  ControlCommand cmd;
  if (driver_pedal > 0.0) {
    cmd.authority = Authority::kDriverOverride;
    return cmd;
  }
  if (a_desired > c.accel_deadband) {
    const int gear = p.gear_for_speed(state.speed());
    const double omega = p.driven_axle == dynamics::DrivenAxle::kFront
                             ? state.omega_front
                             : state.omega_rear;
    const double rpm = p.engine_rpm(omega, gear);
    const double required =
        p.mass * a_desired +
        dynamics::resistive_forces(p, state.speed(), grade).total();
    if (detail::wheel_force_at_throttle(p, 1.0, rpm, gear) <= required) {
      cmd.throttle = 1.0;  // demand beyond the map: saturate wide open
      return cmd;
    }
    if (detail::wheel_force_at_throttle(p, 0.0, rpm, gear) >= required) {
      return cmd;  // idle torque already covers the demand
    }
    // Bisection over throttle; the engine map is monotone in throttle at
    // fixed speed. Keeps the upper endpoint so the returned setting always
    // covers the demand.
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      if (detail::wheel_force_at_throttle(p, mid, rpm, gear) >= required) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    cmd.throttle = hi;
  } else if (a_desired < -c.accel_deadband) {
    cmd.brake_duty = std::clamp(
        c.brake_duty_slope * -a_desired + c.brake_duty_offset, 0.0, 100.0);
  }
  return cmd;
}

/// Integrator of the steering position servo, carried between steps.
struct SteeringServoState {
  double integrator = 0.0;
};

/// PI position loop on the road-wheel angle, fed back from the angle sensor.
/// Output is the normalized motor command; the integrator freezes while the
/// command saturates.
inline double steering_pi(double target_angle, double measured_angle,
                          SteeringServoState& servo, const ActuationConfig& c,
                          double dt) {
  return pi_step(target_angle - measured_angle, c.steer_kp, c.steer_ki,
                 -c.steer_command_limit, c.steer_command_limit,
                 servo.integrator, dt);
}

/// Road-wheel angle state of the steering column and motor.
struct SteeringPlantState {
  double angle = 0.0;  // delta_f [rad]
};

/// Motor-plus-column response: first-order lag toward the commanded angle
/// (motor command scaled by the travel limit), slew-limited and hard-clamped
/// at the travel limit.
inline double steering_plant(double motor_command, SteeringPlantState& plant,
                             const ActuationConfig& c, double dt) {
  if (dt <= 0.0) throw InputDomainError("steering_plant: dt must be positive");
  const double command =
      std::clamp(motor_command, -c.steer_command_limit, c.steer_command_limit);
  const double target = command / c.steer_command_limit * c.steer_angle_limit;
  double step = (target - plant.angle) / c.steer_time_constant * dt;
  const double max_step = c.steer_rate_limit * dt;
  step = std::clamp(step, -max_step, max_step);
  plant.angle = std::clamp(plant.angle + step, -c.steer_angle_limit,
                           c.steer_angle_limit);
  return plant.angle;
}

}  // namespace lcvsim::actuation
