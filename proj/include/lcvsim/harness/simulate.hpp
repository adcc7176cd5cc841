#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lcvsim/actuation/actuation.hpp"
#include "lcvsim/comms/channel.hpp"
#include "lcvsim/comms/v2v.hpp"
#include "lcvsim/dynamics/plant.hpp"
#include "lcvsim/guidance/longitudinal.hpp"
#include "lcvsim/guidance/path.hpp"
#include "lcvsim/harness/corridor.hpp"
#include "lcvsim/harness/geo.hpp"
#include "lcvsim/harness/lead.hpp"
#include "lcvsim/harness/metrics.hpp"
#include "lcvsim/harness/scenario.hpp"
#include "lcvsim/harness/trace.hpp"
#include "lcvsim/sensing/gps.hpp"
#include "lcvsim/sensing/heading.hpp"
#include "lcvsim/sensing/lidar.hpp"
#include "lcvsim/sensing/radar.hpp"
#include "lcvsim/util/rng.hpp"

namespace lcvsim::harness {

/// Receiver-side state of the V2V feed: latches the latest value per field
/// as packages arrive (in any order, duplicates win by recency) and tracks
/// when the acceleration feed was last refreshed, which drives the
/// staleness fallback in the guidance layer.
class V2VReceiver {
 public:
  void accept(const comms::UdpPackage& pkg, double arrival_time) {
    const double value = comms::decode_payload(pkg.payload);
    switch (pkg.id) {
      case comms::kFieldAccel:
        message_.accel = value;
        has_accel_ = true;
        accel_arrival_ = arrival_time;
        break;
      case comms::kFieldLatitude:
        message_.latitude = value;
        break;
      case comms::kFieldLongitude:
        message_.longitude = value;
        break;
      case comms::kFieldTimestamp:
        message_.timestamp = value;
        break;
      case comms::kFieldSender:
        message_.sender = static_cast<std::uint32_t>(value);
        break;
      default:
        ++unknown_count_;
        break;
    }
  }

  /// The feed is stale until the first acceleration arrives and again when
  /// the last one is older than the timeout.
  bool accel_stale(double now, double timeout) const {
    return !has_accel_ || now - accel_arrival_ > timeout;
  }

  const comms::V2VMessage& message() const { return message_; }
  std::size_t unknown_count() const { return unknown_count_; }

 private:
  comms::V2VMessage message_;
  bool has_accel_ = false;
  double accel_arrival_ = 0.0;
  std::size_t unknown_count_ = 0;
};

struct RunResult {
  bool passed = false;
  bool aborted = false;
  std::size_t abort_step = 0;
  std::string failure_reason;
  Metrics metrics;
};

struct RunOutput {
  Trace trace;
  RunResult result;
};

struct RunOptions {
  /// Called once per plant step with the step index, the state at the start
  /// of the step and the inputs applied over it. For rate/hold diagnostics.
  std::function<void(std::size_t, const dynamics::VehicleState&,
                     const dynamics::PlantInputs&)>
      observer;
};

namespace detail {

/// Column schema is a pure function of the scenario kind.
inline std::vector<std::string> trace_columns(ScenarioKind kind) {
  std::vector<std::string> cols = {
      "step",        "t",          "x",
      "y",           "heading",    "vx",
      "vy",          "yaw_rate",   "speed",
      "omega_front", "omega_rear", "gear",
      "ax",          "ay",         "a_desired",
      "throttle",    "brake_duty", "steer_target",
      "steer_motor", "steer_angle", "gps_x",
      "gps_y",       "gps_heading", "gps_speed",
      "compass_heading", "fused_heading"};
  switch (kind) {
    case ScenarioKind::kCaccFollow: {
      const std::vector<std::string> extra = {
          "lead_x",      "lead_y",     "lead_speed", "lead_accel",
          "range_true",  "radar_range", "radar_rate", "radar_valid",
          "spacing_error", "v2v_accel", "v2v_stale",  "speed_delta"};
      cols.insert(cols.end(), extra.begin(), extra.end());
      break;
    }
    case ScenarioKind::kDoubleLaneChange: {
      const std::vector<std::string> extra = {
          "target_index", "bearing_error", "path_complete",
          "corridor_lo",  "corridor_hi"};
      cols.insert(cols.end(), extra.begin(), extra.end());
      break;
    }
    case ScenarioKind::kWaypointFollow: {
      const std::vector<std::string> extra = {"target_index", "bearing_error",
                                              "path_complete"};
      cols.insert(cols.end(), extra.begin(), extra.end());
      break;
    }
    case ScenarioKind::kOpenLoopReplay:
      break;
  }
  return cols;
}

}  // namespace detail

/// Runs one scenario end to end on a single thread. Deterministic: the same
/// scenario and seed produce an identical trace.
///
/// Schedule per plant step k (t = k * plant_dt):
///   1. sensors whose divisor divides k sample the truth and latch,
///   2. on control steps the lead broadcast is pushed through the channel,
///      arrivals are polled, guidance and actuation run on the latched
///      measurements, and one trace row is written,
///   3. the steering column advances at the plant rate under the held motor
///      command, and the plant integrates one RK4 step with inputs held.
/// A final row at t = duration closes the trace. Numerical divergence aborts
/// the run, keeping the trace rows produced so far as the diagnostic prefix.
inline RunOutput run_scenario(const Scenario& s, const RunOptions& opts = {}) {
  s.validate();

  const double dt = s.plant_dt;
  const double dt_control = dt * static_cast<double>(s.control_divisor);
  const std::size_t total_steps = s.total_steps();
  const bool follows_path = s.kind == ScenarioKind::kDoubleLaneChange ||
                            s.kind == ScenarioKind::kWaypointFollow;
  const bool has_lead = s.kind == ScenarioKind::kCaccFollow;

  // Independent deterministic sub-streams per stochastic component.
  sensing::GpsModel gps(s.gps, derive_seed(s.seed, "gps"));
  sensing::CompassModel compass(s.compass, derive_seed(s.seed, "compass"));
  sensing::RadarModel radar(s.radar, derive_seed(s.seed, "radar"));
  sensing::LidarModel lidar(s.lidar, derive_seed(s.seed, "lidar"));
  comms::Channel<comms::UdpPackage> channel(s.channel,
                                            derive_seed(s.seed, "channel"));
  V2VReceiver receiver;
  const LocalTangentPlane ltp(s.origin_lat, s.origin_lon);

  dynamics::VehicleState state;
  state.x = s.ego_x;
  state.y = s.ego_y;
  state.heading = s.ego_heading;
  state.vx = s.ego_speed;
  state.omega_front = s.ego_speed / s.vehicle.wheel_radius;
  state.omega_rear = state.omega_front;

  KinematicLead lead(has_lead ? s.lead_profile : SpeedProfile({{0.0, 0.0}}),
                     s.ego_x + s.lead_gap * std::cos(s.ego_heading),
                     s.ego_y + s.lead_gap * std::sin(s.ego_heading),
                     s.ego_heading);
  auto lead_state = [&](double t) {
    dynamics::VehicleState l;
    l.x = lead.x(t);
    l.y = lead.y(t);
    l.heading = lead.heading();
    l.vx = lead.speed(t);
    return l;
  };

  guidance::WaypointPath path;
  if (follows_path) {
    path.points = s.waypoints;
    path.switch_radius = s.switch_radius;
  }

  actuation::SteeringServoState servo;
  actuation::SteeringPlantState column;
  guidance::CcState cc;
  PidState path_pid;

  // Latched measurements (all sampled at k = 0 before the first control
  // step, so the controllers never see defaults).
  sensing::GpsFix gps_fix;
  double compass_heading = 0.0;
  sensing::RadarTrack radar_track;
  std::vector<sensing::LidarObject> lidar_objects;

  // Held controller outputs.
  actuation::ControlCommand command;
  dynamics::PlantInputs inputs;
  inputs.grade = s.grade;
  double a_desired = 0.0;
  double steer_target = 0.0;
  double motor_command = 0.0;
  double bearing = 0.0;
  double heading_fused = 0.0;
  bool v2v_stale = true;

  RunOutput out;
  out.trace = Trace(detail::trace_columns(s.kind));
  std::vector<double> row;
  row.reserve(out.trace.columns().size());

  auto append_row = [&](std::size_t k, double t) {
    // Body accelerations as an accelerometer at the CG would report them:
    // force over mass, without the kinematic coupling terms.
    const dynamics::StateDerivative d =
        dynamics::state_derivative(state, inputs, s.vehicle);
    const double ax = d.ax - state.yaw_rate * state.vy;
    const double ay = d.ay + state.yaw_rate * state.vx;

    row.clear();
    row.insert(row.end(),
               {static_cast<double>(k), t, state.x, state.y, state.heading,
                state.vx, state.vy, state.yaw_rate, state.speed(),
                state.omega_front, state.omega_rear,
                static_cast<double>(inputs.gear), ax, ay, a_desired,
                command.throttle, command.brake_duty, steer_target,
                motor_command, column.angle, gps_fix.x, gps_fix.y,
                gps_fix.heading, gps_fix.speed, compass_heading,
                heading_fused});
    if (s.kind == ScenarioKind::kCaccFollow) {
      const auto l = lead_state(t);
      const double range_true =
          std::hypot(l.x - state.x, l.y - state.y) - s.radar.ego_half_length -
          s.radar.lead_half_length;
      const double spacing_error =
          range_true - (s.gains.standstill_gap +
                        s.gains.time_headway * state.speed());
      row.insert(row.end(),
                 {l.x, l.y, l.vx, lead.accel(t), range_true, radar_track.range,
                  radar_track.range_rate, radar_track.valid ? 1.0 : 0.0,
                  spacing_error, receiver.message().accel,
                  v2v_stale ? 1.0 : 0.0, l.vx - state.speed()});
    } else if (follows_path) {
      row.insert(row.end(),
                 {static_cast<double>(path.target_index), bearing,
                  path.complete ? 1.0 : 0.0});
      if (s.kind == ScenarioKind::kDoubleLaneChange) {
        const CorridorSection* sec = s.corridor.section_at(state.x);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.insert(row.end(),
                   {sec ? sec->center_y - sec->width / 2.0 : nan,
                    sec ? sec->center_y + sec->width / 2.0 : nan});
      }
    }
    out.trace.add_row(row);
  };

  try {
    for (std::size_t k = 0; k <= total_steps; ++k) {
      const double t = static_cast<double>(k) * dt;

      if (k % s.gps_divisor == 0) gps_fix = gps.sample(state, t);
      if (k % s.compass_divisor == 0) compass_heading = compass.sample(state.heading);
      if (has_lead && k % s.radar_divisor == 0) {
        radar_track = radar.sample(state, lead_state(t), t);
      }
      if (k % s.lidar_divisor == 0) {
        lidar_objects = lidar.sample(state, s.obstacles, t);
      }

      if (k % s.control_divisor == 0) {
        if (has_lead) {
          comms::V2VMessage msg;
          msg.accel = lead.accel(t);
          const auto [lat, lon] = ltp.to_geodetic(lead.x(t), lead.y(t));
          msg.latitude = lat;
          msg.longitude = lon;
          msg.timestamp = t;
          msg.sender = s.lead_sender;
          for (const auto& pkg : comms::encode_v2v(msg)) {
            channel.submit(pkg, t, msg.sender);
          }
          for (const auto& delivery : channel.poll(t)) {
            receiver.accept(delivery.payload, delivery.delivery_time);
          }
          v2v_stale = receiver.accel_stale(t, s.gains.v2v_timeout);
        }

        heading_fused =
            sensing::heading_fusion(compass_heading, gps_fix.heading).heading;

        switch (s.kind) {
          case ScenarioKind::kCaccFollow: {
            double acc_out = 0.0;
            if (radar_track.valid) {
              acc_out = guidance::acc_control(radar_track.range,
                                              radar_track.range_rate,
                                              gps_fix.speed, s.gains);
            }
            a_desired =
                guidance::cacc_control(acc_out, receiver.message().accel,
                                       v2v_stale, s.gains);
            break;
          }
          case ScenarioKind::kDoubleLaneChange:
          case ScenarioKind::kWaypointFollow: {
            guidance::select_waypoint(gps_fix.x, gps_fix.y, path);
            const auto& [tx, ty] = path.points[path.target_index];
            bearing = guidance::bearing_error(gps_fix.x, gps_fix.y,
                                              heading_fused, tx, ty);
            steer_target =
                guidance::path_follow_pid(bearing, path_pid, s.follower,
                                          dt_control);
            steer_target = guidance::obstacle_correction(
                steer_target, lidar_objects, gps_fix.speed, s.obstacle);
            // Waypoint runs brake to a stop once the course is done; the
            // lane change keeps its entry speed through the exit gate.
            const double v_ref =
                (s.kind == ScenarioKind::kWaypointFollow && path.complete)
                    ? 0.0
                    : s.v_ref;
            a_desired = guidance::cc_control(v_ref, gps_fix.speed, cc,
                                             s.gains, dt_control);
            break;
          }
          case ScenarioKind::kOpenLoopReplay:
            a_desired = 0.0;
            steer_target = s.steer_profile.speed(t);
            break;
        }

        if (s.kind == ScenarioKind::kOpenLoopReplay) {
          command = actuation::ControlCommand{};
          command.throttle = std::clamp(s.throttle_profile.speed(t), 0.0, 1.0);
          command.brake_duty = s.brake_duty;
        } else {
          command = actuation::longitudinal_actuation(
              a_desired, state, s.vehicle, s.actuation, /*driver_pedal=*/0.0,
              s.grade);
        }
        motor_command =
            actuation::steering_pi(steer_target, column.angle, servo,
                                   s.actuation, dt_control);

        inputs.throttle = command.throttle;
        const double brake_total =
            actuation::brake_torque_from_duty(s.actuation, command.brake_duty);
        inputs.brake_front = brake_total * s.vehicle.brake_front_share;
        inputs.brake_rear = brake_total * (1.0 - s.vehicle.brake_front_share);
        inputs.gear = s.vehicle.gear_for_speed(state.speed());

        append_row(k, t);
      }

      if (k == total_steps) break;

      // The column is physical: it moves every plant step while the motor
      // command is held between control samples.
      inputs.steer_front =
          actuation::steering_plant(motor_command, column, s.actuation, dt);
      if (opts.observer) opts.observer(k, state, inputs);
      state = dynamics::integrate_step(state, inputs, s.vehicle, dt, k);
    }
  } catch (const DivergenceError& e) {
    out.result.aborted = true;
    out.result.abort_step = e.step_index();
    out.result.failure_reason = e.what();
    out.result.passed = false;
    return out;
  }

  // Pass/fail and metrics per kind.
  auto& metrics = out.result.metrics;
  metrics.push_back({"duration", s.duration});
  metrics.push_back({"final_speed", state.speed()});

  switch (s.kind) {
    case ScenarioKind::kDoubleLaneChange: {
      const CorridorEvaluation eval = evaluate_dlc(
          out.trace, s.corridor, s.vehicle.body_length, s.vehicle.body_width);
      const double peak_yaw = peak_abs(out.trace, "yaw_rate");
      const double peak_ay = peak_abs(out.trace, "ay");
      metrics.push_back({"corridor_pass", eval.pass ? 1.0 : 0.0});
      metrics.push_back({"corridor_max_exceedance", eval.max_exceedance});
      metrics.push_back({"corridor_min_margin", eval.min_margin});
      metrics.push_back({"peak_yaw_rate", peak_yaw});
      metrics.push_back({"peak_lateral_accel", peak_ay});
      const bool traversed = state.x >= s.corridor.course_end();
      out.result.passed = eval.pass && traversed;
      if (!eval.pass) {
        out.result.failure_reason = "corridor exceedance of " +
                                    format_double(eval.max_exceedance) + " m";
      } else if (!traversed) {
        out.result.failure_reason = "run ended before the course exit";
      }
      break;
    }
    case ScenarioKind::kCaccFollow: {
      const ConvergenceSummary sum = convergence_summary(out.trace);
      metrics.push_back({"peak_speed_delta", sum.peak_speed_delta});
      metrics.push_back({"settling_time", sum.settling_time});
      metrics.push_back({"settled", sum.settled ? 1.0 : 0.0});
      metrics.push_back({"peak_spacing_error", sum.peak_spacing_error});
      metrics.push_back({"rms_spacing_error", sum.rms_spacing_error});
      metrics.push_back({"final_spacing_error", sum.final_spacing_error});
      out.result.passed = sum.settled;
      if (!sum.settled) {
        out.result.failure_reason = "speed delta did not settle";
      }
      break;
    }
    case ScenarioKind::kWaypointFollow: {
      metrics.push_back({"path_complete", path.complete ? 1.0 : 0.0});
      metrics.push_back({"completion_time", completion_time(out.trace)});
      out.result.passed = path.complete;
      if (!path.complete) {
        out.result.failure_reason = "waypoint course not completed";
      }
      break;
    }
    case ScenarioKind::kOpenLoopReplay: {
      metrics.push_back({"distance", std::hypot(state.x - s.ego_x,
                                                state.y - s.ego_y)});
      out.result.passed = true;
      break;
    }
  }
  return out;
}

}  // namespace lcvsim::harness
