#pragma once

#include <cmath>

namespace lcvsim::dynamics {

/// Speed below which slip quantities are zeroed instead of dividing by a
/// near-zero velocity. 0.1 m/s; the plant is never operated meaningfully
/// below walking pace.
inline constexpr double kVelocityEpsilon = 0.1;

/// Full kinematic/dynamic state of one vehicle. Velocities are body-frame,
/// position and heading are global, heading counter-clockwise positive.
struct VehicleState {
  double x = 0.0;            // [m]
  double y = 0.0;            // [m]
  double heading = 0.0;      // yaw angle [rad]
  double vx = 0.0;           // longitudinal velocity [m/s]
  double vy = 0.0;           // lateral velocity [m/s]
  double yaw_rate = 0.0;     // [rad/s]
  double omega_front = 0.0;  // front axle angular speed [rad/s]
  double omega_rear = 0.0;   // rear axle angular speed [rad/s]

  double speed() const { return std::hypot(vx, vy); }

  /// Sideslip angle; zero below the velocity epsilon where it is undefined.
  double sideslip() const {
    return speed() > kVelocityEpsilon ? std::atan2(vy, vx) : 0.0;
  }

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(heading) &&
           std::isfinite(vx) && std::isfinite(vy) && std::isfinite(yaw_rate) &&
           std::isfinite(omega_front) && std::isfinite(omega_rear);
  }
};

/// Time derivative of VehicleState. ax/ay are the body-frame velocity
/// derivatives d(vx)/dt and d(vy)/dt.
struct StateDerivative {
  double dx = 0.0;
  double dy = 0.0;
  double dheading = 0.0;
  double ax = 0.0;
  double ay = 0.0;
  double yaw_accel = 0.0;
  double domega_front = 0.0;
  double domega_rear = 0.0;
};

/// Inputs applied to the plant over one step. The rear axle is unsteered
/// (front-steered vehicle); brake torques are per axle and non-negative.
struct PlantInputs {
  double steer_front = 0.0;  // road-wheel angle [rad]
  double throttle = 0.0;     // [0, 1]
  double brake_front = 0.0;  // [N m]
  double brake_rear = 0.0;   // [N m]
  double grade = 0.0;        // road inclination [rad]
  int gear = 0;              // index into the gear ratio table
};

/// Slip quantities for both axles of the single-track model.
struct SlipState {
  double alpha_front = 0.0;  // slip angle [rad]
  double alpha_rear = 0.0;
  double vx_front = 0.0;     // contact patch longitudinal speed [m/s]
  double vx_rear = 0.0;
  double slip_front = 0.0;   // slip ratio, clamped to [-1, 1]
  double slip_rear = 0.0;
};

/// Per-axle tire forces with the saturation factors that produced them.
struct TireForces {
  double fx_front = 0.0;      // [N]
  double fx_rear = 0.0;
  double fy_front = 0.0;      // [N]
  double fy_rear = 0.0;
  double fz_front = 0.0;      // normal load [N]
  double fz_rear = 0.0;
  double sat_front = 1.0;     // friction saturation factor, (0, 1]
  double sat_rear = 1.0;
  double demand_front = 0.0;  // combined-force demand [N]
  double demand_rear = 0.0;
};

/// Forces resisting longitudinal motion.
struct ResistiveForces {
  double aero = 0.0;     // [N], >= 0
  double rolling = 0.0;  // [N], >= 0
  double grade = 0.0;    // [N], signed with the inclination

  double total() const { return aero + rolling + grade; }
};

}  // namespace lcvsim::dynamics
