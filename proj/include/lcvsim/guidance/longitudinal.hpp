#pragma once

#include <algorithm>
#include <cmath>

#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/kv_file.hpp"
#include "lcvsim/util/pid.hpp"

namespace lcvsim::guidance {

/// Gains and policy of the longitudinal stack: PI cruise control, PD spacing
/// control with a constant-time-headway policy, and the feedforward path fed
/// from the lead vehicle's broadcast acceleration.
struct LongitudinalGains {
  double cc_kp = 0.8;          // [1/s]
  double cc_ki = 0.3;          // [1/s^2]
  double acc_kp = 0.45;        // [1/s^2] on spacing error
  double acc_kd = 0.3;         // [1/s] on range rate
  double standstill_gap = 5.0; // d_0 [m]
  double time_headway = 0.6;   // h [s]
  double feedforward_gain = 1.0;  // k_ff
  double v2v_timeout = 0.5;    // lead-feed staleness cutoff [s]
  double a_min = -3.5;         // comfort limits [m/s^2]
  double a_max = 1.2;

  void validate() const {
    if (cc_kp < 0.0 || cc_ki < 0.0 || acc_kp < 0.0 || acc_kd < 0.0) {
      throw ConfigError("guidance: gains must be non-negative");
    }
    if (!(time_headway > 0.0)) {
      throw ConfigError("guidance: time headway must be positive");
    }
    if (standstill_gap < 0.0) {
      throw ConfigError("guidance: standstill gap must be non-negative");
    }
    if (!(a_min < 0.0 && 0.0 < a_max)) {
      throw ConfigError("guidance: limits must satisfy a_min < 0 < a_max");
    }
    if (!(v2v_timeout > 0.0)) {
      throw ConfigError("guidance: v2v timeout must be positive");
    }
  }

  static LongitudinalGains from_section(const KvSection& kv) {
    LongitudinalGains g;
    g.cc_kp = kv.get_double("cc_kp", g.cc_kp);
    g.cc_ki = kv.get_double("cc_ki", g.cc_ki);
    g.acc_kp = kv.get_double("acc_kp", g.acc_kp);
    g.acc_kd = kv.get_double("acc_kd", g.acc_kd);
    g.standstill_gap = kv.get_double("standstill_gap", g.standstill_gap);
    g.time_headway = kv.get_double("time_headway", g.time_headway);
    g.feedforward_gain = kv.get_double("feedforward_gain", g.feedforward_gain);
    g.v2v_timeout = kv.get_double("v2v_timeout", g.v2v_timeout);
    g.a_min = kv.get_double("a_min", g.a_min);
    g.a_max = kv.get_double("a_max", g.a_max);
    g.validate();
    return g;
  }
};

/// Integrator of the cruise controller, carried between control samples.
struct CcState {
  double integrator = 0.0;
};

/// PI speed tracking: desired acceleration from the speed error, clamped to
/// the acceleration limits with conditional anti-windup.
inline double cc_control(double v_ref, double v, CcState& state,
                         const LongitudinalGains& g, double dt) {
  return pi_step(v_ref - v, g.cc_kp, g.cc_ki, g.a_min, g.a_max,
                 state.integrator, dt);
}

/// PD spacing control against the constant-time-headway policy
/// d_0 + h * v: proportional on the spacing error, derivative on the
/// measured range rate (negative while closing).
inline double acc_control(double range, double range_rate, double ego_v,
                          const LongitudinalGains& g) {
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw SensorFaultError("acc_control: non-positive range");
  }
  const double spacing_error = range - (g.standstill_gap + g.time_headway * ego_v);
  return std::clamp(g.acc_kp * spacing_error + g.acc_kd * range_rate, g.a_min,
                    g.a_max);
}

/// Adds the broadcast lead acceleration on top of the ACC output. A stale
/// V2V feed contributes nothing, degrading gracefully to plain ACC.
inline double cacc_control(double acc_output, double lead_accel, bool stale,
                           const LongitudinalGains& g) {
  if (!stale && !std::isfinite(lead_accel)) {
    throw InputDomainError("cacc_control: non-finite lead acceleration");
  }
  const double feedforward = stale ? 0.0 : g.feedforward_gain * lead_accel;
  return std::clamp(acc_output + feedforward, g.a_min, g.a_max);
}

}  // namespace lcvsim::guidance
