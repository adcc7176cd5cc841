#pragma once

#include <algorithm>

#include "lcvsim/util/errors.hpp"

namespace lcvsim {

/// Clamped PI step with conditional anti-windup: the integrator only
/// accumulates when the unsaturated output stays inside [lo, hi], so a
/// saturated controller does not wind up while the plant catches up.
///
/// `integrator` is carried by the caller between steps.
inline double pi_step(double error, double kp, double ki, double lo, double hi,
                      double& integrator, double dt) {
  if (dt <= 0.0) throw InputDomainError("pi_step: dt must be positive");
  if (lo > hi) throw InputDomainError("pi_step: empty output range");
  const double candidate = integrator + error * dt;
  const double unsaturated = kp * error + ki * candidate;
  if (unsaturated >= lo && unsaturated <= hi) {
    integrator = candidate;
    return unsaturated;
  }
  return std::clamp(kp * error + ki * integrator, lo, hi);
}

/// PID controller with symmetric output limits, conditional anti-windup and
/// backward-difference derivative (zero on the first step, when no previous
/// error exists yet).
struct PidState {
  double integrator = 0.0;
  double prev_error = 0.0;
  bool has_prev = false;

  void reset() {
    integrator = 0.0;
    prev_error = 0.0;
    has_prev = false;
  }
};

inline double pid_step(double error, double kp, double ki, double kd,
                       double lo, double hi, PidState& state, double dt) {
  if (dt <= 0.0) throw InputDomainError("pid_step: dt must be positive");
  if (lo > hi) throw InputDomainError("pid_step: empty output range");
  const double derivative =
      state.has_prev ? (error - state.prev_error) / dt : 0.0;
  state.prev_error = error;
  state.has_prev = true;
  const double candidate = state.integrator + error * dt;
  const double unsaturated = kp * error + ki * candidate + kd * derivative;
  if (unsaturated >= lo && unsaturated <= hi) {
    state.integrator = candidate;
    return unsaturated;
  }
  return std::clamp(kp * error + ki * state.integrator + kd * derivative, lo,
                    hi);
}

}  // namespace lcvsim
