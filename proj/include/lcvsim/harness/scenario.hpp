#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lcvsim/actuation/actuation.hpp"
#include "lcvsim/comms/channel.hpp"
#include "lcvsim/dynamics/parameters.hpp"
#include "lcvsim/guidance/longitudinal.hpp"
#include "lcvsim/guidance/path.hpp"
#include "lcvsim/harness/corridor.hpp"
#include "lcvsim/harness/geo.hpp"
#include "lcvsim/harness/lead.hpp"
#include "lcvsim/sensing/gps.hpp"
#include "lcvsim/sensing/heading.hpp"
#include "lcvsim/sensing/lidar.hpp"
#include "lcvsim/sensing/radar.hpp"
#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/kv_file.hpp"

namespace lcvsim::harness {

enum class ScenarioKind {
  kDoubleLaneChange,
  kCaccFollow,
  kWaypointFollow,
  kOpenLoopReplay,
};

inline std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kDoubleLaneChange: return "double-lane-change";
    case ScenarioKind::kCaccFollow: return "cacc-follow";
    case ScenarioKind::kWaypointFollow: return "waypoint-follow";
    case ScenarioKind::kOpenLoopReplay: return "open-loop-replay";
  }
  throw InputDomainError("unknown scenario kind");
}

inline ScenarioKind parse_kind(const std::string& text) {
  if (text == "double-lane-change") return ScenarioKind::kDoubleLaneChange;
  if (text == "cacc-follow") return ScenarioKind::kCaccFollow;
  if (text == "waypoint-follow") return ScenarioKind::kWaypointFollow;
  if (text == "open-loop-replay") return ScenarioKind::kOpenLoopReplay;
  throw ConfigError("unknown scenario kind '" + text + "'");
}

/// Everything one run needs, fully resolved and validated: plant and
/// actuation parameters, controller gains, sensor noise, channel impairment,
/// the course/lead definition, and the schedule. Loaded from an INI-style
/// scenario file; every unknown key or section is an error.
struct Scenario {
  ScenarioKind kind = ScenarioKind::kOpenLoopReplay;
  std::string name;

  // Schedule. The plant steps at plant_dt; each subsystem fires every
  // `divisor` plant steps. Controllers fire on the control divisor, the lead
  // broadcasts each control period.
  double duration = 10.0;     // [s]
  double plant_dt = 1e-3;     // [s]
  std::size_t control_divisor = 10;
  std::size_t gps_divisor = 100;
  std::size_t compass_divisor = 20;
  std::size_t radar_divisor = 50;
  std::size_t lidar_divisor = 80;
  std::uint64_t seed = 1;
  double grade = 0.0;  // road inclination [rad]

  // Geodetic anchor for GPS <-> local conversions and V2V positions.
  double origin_lat = 48.1375;
  double origin_lon = 11.5755;

  dynamics::VehicleParameters vehicle;
  actuation::ActuationConfig actuation;
  guidance::LongitudinalGains gains;
  guidance::PathFollowerGains follower;
  guidance::ObstacleConfig obstacle;
  sensing::GpsNoiseParams gps;
  sensing::CompassParams compass;
  sensing::RadarParams radar;
  sensing::LidarParams lidar;
  comms::ChannelParams channel;

  // Ego initial pose and speed.
  double ego_x = 0.0;
  double ego_y = 0.0;
  double ego_heading = 0.0;
  double ego_speed = 0.0;

  // Cruise reference for the path-following kinds [m/s].
  double v_ref = 0.0;

  // cacc-follow: lead vehicle on a straight line along the ego's initial
  // heading, starting `lead_gap` meters ahead (center to center).
  SpeedProfile lead_profile;
  double lead_gap = 30.0;
  std::uint32_t lead_sender = 1;

  // Path-following kinds.
  std::vector<std::pair<double, double>> waypoints;  // local plane [m]
  double switch_radius = 3.0;
  std::vector<std::pair<double, double>> obstacles;  // world objects [m]

  // double-lane-change only.
  Corridor corridor;

  // open-loop-replay input schedule.
  SpeedProfile throttle_profile;  // [0, 1]
  SpeedProfile steer_profile;     // road-wheel target [rad], signed
  double brake_duty = 0.0;        // constant [%]

  std::size_t total_steps() const {
    return static_cast<std::size_t>(std::llround(duration / plant_dt));
  }

  void validate() const {
    if (!(duration > 0.0)) throw ConfigError("scenario: duration must be positive");
    if (!(plant_dt > 0.0 && plant_dt <= 0.01)) {
      throw ConfigError("scenario: plant_dt must lie in (0, 0.01]");
    }
    auto divisor = [](std::size_t v, const char* name) {
      if (v == 0) {
        throw ConfigError(std::string("scenario: ") + name + " must be >= 1");
      }
    };
    divisor(control_divisor, "control_divisor");
    divisor(gps_divisor, "gps_divisor");
    divisor(compass_divisor, "compass_divisor");
    divisor(radar_divisor, "radar_divisor");
    divisor(lidar_divisor, "lidar_divisor");
    const std::size_t steps = total_steps();
    if (std::abs(static_cast<double>(steps) * plant_dt - duration) > 1e-9) {
      throw ConfigError("scenario: duration must be a multiple of plant_dt");
    }
    if (steps % control_divisor != 0) {
      throw ConfigError("scenario: duration must cover whole control periods");
    }
    if (ego_speed < 0.0) throw ConfigError("scenario: ego speed must be >= 0");

    vehicle.validate();
    actuation.validate();
    gains.validate();
    gps.validate();
    compass.validate();

    switch (kind) {
      case ScenarioKind::kDoubleLaneChange:
        if (corridor.empty()) {
          throw ConfigError("double-lane-change scenario needs a corridor course");
        }
        [[fallthrough]];
      case ScenarioKind::kWaypointFollow:
        if (waypoints.size() < 2) {
          throw ConfigError(to_string(kind) + " scenario needs waypoints");
        }
        if (!(switch_radius > 0.0)) {
          throw ConfigError("scenario: switch_radius must be positive");
        }
        follower.validate();
        obstacle.validate();
        break;
      case ScenarioKind::kCaccFollow:
        if (lead_profile.knots().empty()) {
          throw ConfigError("cacc-follow scenario needs a lead speed profile");
        }
        if (!(lead_gap > 0.0)) {
          throw ConfigError("scenario: lead gap must be positive");
        }
        radar.validate();
        channel.validate();
        break;
      case ScenarioKind::kOpenLoopReplay:
        if (throttle_profile.knots().empty() || steer_profile.knots().empty()) {
          throw ConfigError("open-loop-replay scenario needs input profiles");
        }
        if (brake_duty < 0.0 || brake_duty > 100.0) {
          throw ConfigError("scenario: brake duty must lie in [0, 100]");
        }
        break;
    }
  }

  /// Builds a scenario from parsed INI content. Referenced files are
  /// resolved relative to `base_dir`. Sections irrelevant to the scenario
  /// kind are rejected, as is any unknown key.
  static Scenario from_ini(const IniFile& ini,
                           const std::filesystem::path& base_dir,
                           const std::string& name = {}) {
    Scenario s;
    s.name = name;

    const KvSection& main = ini.section("scenario");
    s.kind = parse_kind(main.require_string("kind"));
    s.duration = main.require_double("duration");
    s.plant_dt = main.get_double("plant_dt", s.plant_dt);
    s.control_divisor = main.get_u64("control_divisor", s.control_divisor);
    s.gps_divisor = main.get_u64("gps_divisor", s.gps_divisor);
    s.compass_divisor = main.get_u64("compass_divisor", s.compass_divisor);
    s.radar_divisor = main.get_u64("radar_divisor", s.radar_divisor);
    s.lidar_divisor = main.get_u64("lidar_divisor", s.lidar_divisor);
    s.seed = main.get_u64("seed", s.seed);
    s.grade = main.get_double("grade", s.grade);
    s.origin_lat = main.get_double("origin_lat", s.origin_lat);
    s.origin_lon = main.get_double("origin_lon", s.origin_lon);

    const KvSection& ego = ini.section("ego");
    const auto vehicle_file = ego.require_string("vehicle");
    const auto vehicle_path = base_dir / vehicle_file;
    const KvSection vehicle_kv = load_kv_file(vehicle_path.string());
    s.vehicle = dynamics::VehicleParameters::from_section(
        vehicle_kv, vehicle_path.parent_path());
    s.actuation = actuation::ActuationConfig::from_section(vehicle_kv);
    if (const auto leftover = vehicle_kv.unconsumed(); !leftover.empty()) {
      throw ConfigError(vehicle_path.string() + ": unknown key '" +
                        leftover.front() + "'");
    }
    s.ego_x = ego.get_double("x", s.ego_x);
    s.ego_y = ego.get_double("y", s.ego_y);
    s.ego_heading = ego.get_double("heading", s.ego_heading);
    s.ego_speed = ego.get_double("speed", s.ego_speed);

    s.gains = guidance::LongitudinalGains::from_section(ini.section("gains"));
    const KvSection& sensors = ini.section("sensors");
    s.gps = sensing::GpsNoiseParams::from_section(sensors);
    s.compass = sensing::CompassParams::from_section(sensors);
    s.radar = sensing::RadarParams::from_section(sensors);
    s.lidar = sensing::LidarParams::from_section(sensors);

    const bool follows_path = s.kind == ScenarioKind::kDoubleLaneChange ||
                              s.kind == ScenarioKind::kWaypointFollow;
    if (follows_path) {
      const KvSection& speed = ini.section("speed");
      s.v_ref = speed.require_double("v_ref");

      const KvSection& path = ini.section("path");
      const auto wp_file = path.require_string("waypoints");
      auto pairs = guidance::load_waypoint_pairs_file((base_dir / wp_file).string());
      const auto frame = path.get_string("frame").value_or("local");
      if (frame == "geodetic") {
        const LocalTangentPlane ltp(s.origin_lat, s.origin_lon);
        for (auto& [a, b] : pairs) {
          const auto [x, y] = ltp.to_local(a, b);
          a = x;
          b = y;
        }
      } else if (frame != "local") {
        throw ConfigError("path frame must be 'local' or 'geodetic'");
      }
      s.waypoints = std::move(pairs);
      s.switch_radius = path.get_double("switch_radius", s.switch_radius);
      s.follower = guidance::PathFollowerGains::from_section(path);
      s.obstacle = guidance::ObstacleConfig::from_section(path);
      if (const auto obs_file = path.get_string("obstacle_file")) {
        s.obstacles =
            guidance::load_waypoint_pairs_file((base_dir / *obs_file).string());
      }
    }

    if (s.kind == ScenarioKind::kDoubleLaneChange) {
      const KvSection& corridor = ini.section("corridor");
      const auto course = corridor.require_string("course");
      s.corridor = Corridor::load_file((base_dir / course).string(),
                                       s.vehicle.body_width);
    }

    if (s.kind == ScenarioKind::kCaccFollow) {
      const KvSection& lead = ini.section("lead");
      s.lead_profile = SpeedProfile::parse(lead.require_string("profile"));
      s.lead_gap = lead.get_double("initial_gap", s.lead_gap);
      s.lead_sender = static_cast<std::uint32_t>(
          lead.get_u64("sender", s.lead_sender));
      s.channel = comms::ChannelParams::from_section(ini.section("channel"));
    }

    if (s.kind == ScenarioKind::kOpenLoopReplay) {
      const KvSection& inputs = ini.section("inputs");
      s.throttle_profile = SpeedProfile::parse(
          inputs.get_string("throttle_profile").value_or("0:0"));
      s.steer_profile = SpeedProfile::parse(
          inputs.get_string("steer_profile").value_or("0:0"),
          /*allow_negative=*/true);
      s.brake_duty = inputs.get_double("brake_duty", s.brake_duty);
    }

    ini.ensure_fully_consumed();
    s.validate();
    return s;
  }
};

/// Loads and fully validates a scenario file; referenced files are resolved
/// relative to the scenario file's directory.
inline Scenario load_scenario(const std::string& path) {
  const std::filesystem::path p(path);
  const IniFile ini = IniFile::load_file(path);
  return Scenario::from_ini(ini, p.parent_path(), p.stem().string());
}

}  // namespace lcvsim::harness
