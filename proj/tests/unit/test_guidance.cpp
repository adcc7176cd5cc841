#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "lcvsim/actuation/actuation.hpp"
#include "lcvsim/dynamics/plant.hpp"
#include "lcvsim/guidance/longitudinal.hpp"
#include "lcvsim/guidance/path.hpp"
#include "lcvsim/util/rng.hpp"
#include "test_params.hpp"

using namespace lcvsim;
using namespace lcvsim::guidance;
using Catch::Approx;

TEST_CASE("cc holds speed with zero error") {
  const LongitudinalGains g;
  CcState state;
  CHECK(cc_control(20.0, 20.0, state, g, 0.01) == 0.0);
  CHECK(state.integrator == 0.0);
}

TEST_CASE("cc proportional term evaluates directly") {
  LongitudinalGains g;
  g.cc_kp = 0.5;
  g.cc_ki = 0.0;
  CcState state;
  CHECK(cc_control(12.0, 10.0, state, g, 0.01) == Approx(1.0));
}

TEST_CASE("cc output saturates at the acceleration limits") {
  const LongitudinalGains g;
  CcState state;
  CHECK(cc_control(100.0, 0.0, state, g, 0.01) == g.a_max);
  CHECK(cc_control(0.0, 100.0, state, g, 0.01) == g.a_min);
}

TEST_CASE("cc integrator freezes while saturated") {
  const LongitudinalGains g;
  CcState state;
  cc_control(100.0, 0.0, state, g, 0.01);
  const double frozen = state.integrator;
  for (int i = 0; i < 20; ++i) {
    CHECK(cc_control(100.0, 0.0, state, g, 0.01) == g.a_max);
    CHECK(state.integrator == frozen);
  }
}

TEST_CASE("acc is quiet at the policy spacing") {
  const LongitudinalGains g;
  const double ego_v = 12.0;
  const double range = g.standstill_gap + g.time_headway * ego_v;
  CHECK(acc_control(range, 0.0, ego_v, g) == 0.0);
}

TEST_CASE("acc proportional-derivative evaluation") {
  LongitudinalGains g;
  g.acc_kp = 0.4;
  g.acc_kd = 0.8;
  g.standstill_gap = 5.0;
  g.time_headway = 1.5;
  g.a_max = 2.5;

  // Spacing error 25 - (5 + 15) = 5 m.
  CHECK(acc_control(25.0, 0.0, 10.0, g) == Approx(2.0));

  // Fast closing pushes the command down.
  CHECK(acc_control(25.0, -3.0, 10.0, g) < acc_control(25.0, 0.0, 10.0, g));

  // Same case with a tighter limit clamps.
  g.a_max = 1.5;
  CHECK(acc_control(25.0, 0.0, 10.0, g) == 1.5);
}

TEST_CASE("acc rejects a non-positive range") {
  const LongitudinalGains g;
  CHECK_THROWS_AS(acc_control(0.0, 0.0, 10.0, g), SensorFaultError);
  CHECK_THROWS_AS(acc_control(-3.0, 0.0, 10.0, g), SensorFaultError);
}

TEST_CASE("cacc adds the broadcast acceleration") {
  LongitudinalGains g;
  g.feedforward_gain = 1.0;
  CHECK(cacc_control(0.5, -1.2, false, g) == Approx(-0.7));
  CHECK(cacc_control(0.5, 0.0, false, g) == Approx(0.5));
}

TEST_CASE("cacc falls back to acc when the feed is stale") {
  const LongitudinalGains g;
  CHECK(cacc_control(0.8, -2.0, true, g) == Approx(0.8));
  // A stale feed tolerates an unusable value.
  CHECK(cacc_control(0.8, std::nan(""), true, g) == Approx(0.8));
  CHECK_THROWS_AS(cacc_control(0.8, std::nan(""), false, g), InputDomainError);
}

TEST_CASE("cacc with zero feedforward gain equals acc exactly") {
  LongitudinalGains g;
  g.feedforward_gain = 0.0;
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double range = rng.uniform(1.0, 80.0);
    const double rate = rng.uniform(-5.0, 5.0);
    const double v = rng.uniform(0.0, 25.0);
    const double acc = acc_control(range, rate, v, g);
    CHECK(cacc_control(acc, rng.uniform(-3.0, 3.0), false, g) == acc);
  }
}

TEST_CASE("cacc output respects the limits") {
  const LongitudinalGains g;
  CHECK(cacc_control(2.0, 5.0, false, g) == g.a_max);
  CHECK(cacc_control(-2.0, -5.0, false, g) == g.a_min);
}

TEST_CASE("bearing error for cardinal targets") {
  const double north = std::numbers::pi / 2.0;
  // Heading north, target due north.
  CHECK(bearing_error(0.0, 0.0, north, 0.0, 10.0) == Approx(0.0).margin(1e-15));
  // Heading north, target due west: +90 deg under left-positive convention.
  CHECK(bearing_error(0.0, 0.0, north, -10.0, 0.0) == Approx(north));
  // Heading north, target due south: the wrap boundary.
  CHECK(bearing_error(0.0, 0.0, north, 0.0, -10.0) == Approx(std::numbers::pi));
}

TEST_CASE("bearing error rejects coincident points") {
  CHECK_THROWS_AS(bearing_error(1.0, 2.0, 0.0, 1.0, 2.0),
                  DegenerateGeometryError);
}

TEST_CASE("bearing error is invariant under heading wrap") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.uniform(-50.0, 50.0);
    const double y = rng.uniform(-50.0, 50.0);
    const double heading = rng.uniform(-3.0, 3.0);
    const double tx = x + rng.uniform(-20.0, 20.0);
    const double ty = y + rng.uniform(-20.0, 20.0);
    if (std::hypot(tx - x, ty - y) < 1e-3) continue;
    const double a = bearing_error(x, y, heading, tx, ty);
    const double b = bearing_error(x, y, heading + 2.0 * std::numbers::pi, tx, ty);
    CHECK(std::abs(wrap_angle(a - b)) < 1e-12);
  }
}

TEST_CASE("bearing error is antisymmetric under target mirroring") {
  Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.uniform(-50.0, 50.0);
    const double y = rng.uniform(-50.0, 50.0);
    const double heading = rng.uniform(-3.0, 3.0);
    // Target ahead of the heading line so neither error sits on the wrap.
    const double forward = rng.uniform(1.0, 30.0);
    const double lateral = rng.uniform(-20.0, 20.0);
    const double c = std::cos(heading);
    const double s = std::sin(heading);
    const double err_left = bearing_error(
        x, y, heading, x + c * forward - s * lateral, y + s * forward + c * lateral);
    const double err_right = bearing_error(
        x, y, heading, x + c * forward + s * lateral, y + s * forward - c * lateral);
    CHECK(err_left == Approx(-err_right).margin(1e-12));
  }
}

TEST_CASE("waypoint selection advances inside the switch radius") {
  WaypointPath path;
  path.points = {{0.0, 0.0}, {10.0, 0.0}, {20.0, 0.0}, {30.0, 0.0}};
  path.switch_radius = 3.0;

  // Far from the current target: no change.
  CHECK(select_waypoint(-20.0, 0.0, path) == 0);
  CHECK_FALSE(path.complete);

  // Inside the radius of waypoint 0: move to 1.
  CHECK(select_waypoint(1.0, 1.0, path) == 1);

  // A position close to several consecutive waypoints skips all of them.
  path.target_index = 0;
  path.switch_radius = 12.0;
  CHECK(select_waypoint(9.0, 0.0, path) == 3);
  CHECK_FALSE(path.complete);
}

TEST_CASE("reaching the final waypoint completes the path") {
  WaypointPath path;
  path.points = {{0.0, 0.0}, {10.0, 0.0}};
  path.switch_radius = 3.0;
  path.target_index = 1;
  CHECK(select_waypoint(9.5, 0.0, path) == 1);
  CHECK(path.complete);
}

TEST_CASE("waypoint path validation") {
  WaypointPath path;
  path.points = {{0.0, 0.0}};
  CHECK_THROWS_AS(path.validate(), ConfigError);

  path.points = {{0.0, 0.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(path.validate(), ConfigError);

  path.points = {{0.0, 0.0}, {1.0, 0.0}};
  path.switch_radius = 0.0;
  CHECK_THROWS_AS(path.validate(), ConfigError);

  path.switch_radius = 2.0;
  path.target_index = 2;
  CHECK_THROWS_AS(path.validate(), ConfigError);
}

TEST_CASE("waypoint file parsing") {
  std::istringstream in(
      "# comment line\n"
      "0.0, 0.0\n"
      "10.0  1.5\n"
      "\n"
      "20.0;3.0\n");
  const auto pairs = load_waypoint_pairs(in, "wp");
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[1].first == 10.0);
  CHECK(pairs[1].second == 1.5);
  CHECK(pairs[2].second == 3.0);

  std::istringstream bad("1.0 2.0 3.0\n");
  CHECK_THROWS_AS(load_waypoint_pairs(bad, "wp"), ParseError);
}

TEST_CASE("path follower pid direct evaluation") {
  PathFollowerGains g;
  g.kp = 1.0;
  g.ki = 0.0;
  g.kd = 0.0;
  PidState state;
  CHECK(path_follow_pid(0.0, state, g, 0.01) == 0.0);
  CHECK(path_follow_pid(0.2, state, g, 0.01) == Approx(0.2));
}

TEST_CASE("path follower derivative of a constant error is zero") {
  PathFollowerGains g;
  g.kp = 0.0;
  g.ki = 0.0;
  g.kd = 5.0;
  g.steer_limit = 100.0;  // out of the way of the raw derivative term
  PidState state;
  CHECK(path_follow_pid(0.3, state, g, 0.01) == 0.0);  // no previous sample
  CHECK(path_follow_pid(0.3, state, g, 0.01) == 0.0);
  // A changing error produces the backward difference.
  CHECK(path_follow_pid(0.4, state, g, 0.01) == Approx(5.0 * 0.1 / 0.01));
}

TEST_CASE("path follower output clamps at the steering limit") {
  PathFollowerGains g;
  g.kp = 10.0;
  g.steer_limit = 0.5;
  PidState state;
  CHECK(path_follow_pid(2.0, state, g, 0.01) == 0.5);
  CHECK(path_follow_pid(-2.0, state, g, 0.01) == -0.5);
}

TEST_CASE("obstacle correction identity cases") {
  const ObstacleConfig c;
  std::vector<sensing::LidarObject> objects;

  // No objects.
  CHECK(obstacle_correction(0.1, objects, 2.0, c) == 0.1);

  // Object outside the corridor.
  objects.push_back({20.0, 0.5, 0.0});
  CHECK(obstacle_correction(0.1, objects, 2.0, c) == 0.1);

  // Above the low-speed threshold the correction is inactive.
  objects.push_back({4.0, 0.2, 0.0});
  CHECK(obstacle_correction(0.1, objects, 10.0, c) == 0.1);
}

TEST_CASE("obstacle correction steers away from the intruder") {
  const ObstacleConfig c;
  std::vector<sensing::LidarObject> left = {{4.0, 0.3, 0.0}};
  std::vector<sensing::LidarObject> right = {{4.0, -0.3, 0.0}};

  // Object left of the centerline: steer right (negative), and vice versa.
  CHECK(obstacle_correction(0.0, left, 2.0, c) < 0.0);
  CHECK(obstacle_correction(0.0, right, 2.0, c) > 0.0);

  // Dead-center objects break the tie to the right.
  std::vector<sensing::LidarObject> center = {{4.0, 0.0, 0.0}};
  CHECK(obstacle_correction(0.0, center, 2.0, c) < 0.0);

  // Sideways proximity just behind the bumper line still corrects.
  std::vector<sensing::LidarObject> side = {{-1.0, 0.8, 0.0}};
  CHECK(obstacle_correction(0.0, side, 2.0, c) < 0.0);
}

TEST_CASE("obstacle correction picks the deepest intruder and clamps") {
  ObstacleConfig c;
  c.gain = 0.5;
  c.max_correction = 0.2;

  // Deeper intruder on the right outweighs the shallow one on the left.
  std::vector<sensing::LidarObject> objects = {{3.0, 1.2, 0.0}, {5.0, -0.1, 0.0}};
  const double out = obstacle_correction(0.0, objects, 2.0, c);
  CHECK(out > 0.0);

  // Intrusion of 1.4 m at gain 0.5 would be 0.7 rad; clamps to 0.2.
  CHECK(out == Approx(0.2));
}

TEST_CASE("longitudinal gains validate and load") {
  LongitudinalGains g;
  g.time_headway = 0.0;
  CHECK_THROWS_AS(g.validate(), ConfigError);

  g = LongitudinalGains{};
  g.a_min = 0.5;
  CHECK_THROWS_AS(g.validate(), ConfigError);

  std::istringstream in(
      "acc_kp = 0.6\n"
      "time_headway = 1.2\n"
      "feedforward_gain = 0.9\n");
  const auto kv = load_kv_file(in, "gains");
  const auto loaded = LongitudinalGains::from_section(kv);
  CHECK(loaded.acc_kp == 0.6);
  CHECK(loaded.time_headway == 1.2);
  CHECK(loaded.feedforward_gain == 0.9);
  CHECK(kv.unconsumed().empty());
}

// Full-stack lateral convergence: plant + actuation + path follower on a
// straight two-waypoint path, control at 100 Hz over a 1 kHz plant.
TEST_CASE("straight-path following pulls in an initial lateral offset") {
  const auto p = make_test_params();
  const actuation::ActuationConfig act;
  PathFollowerGains follower;
  LongitudinalGains lon;

  WaypointPath path;
  path.points = {{0.0, 0.0}, {100.0, 0.0}};
  path.switch_radius = 3.0;
  path.target_index = 1;

  dynamics::VehicleState s;
  s.y = 2.0;
  s.vx = 5.0;
  s.omega_front = s.omega_rear = s.vx / p.wheel_radius;

  CcState cc;
  PidState follow_state;
  actuation::SteeringServoState servo;
  actuation::SteeringPlantState column;

  const double dt = 1e-3;
  const double dt_ctrl = 0.01;
  dynamics::PlantInputs inputs;
  double motor_cmd = 0.0;
  double settled_at = -1.0;
  bool stayed = true;

  for (int k = 0; k < 40000 && !path.complete; ++k) {
    if (k % 10 == 0) {
      select_waypoint(s.x, s.y, path);
      const auto& [tx, ty] = path.points[path.target_index];
      const double err = bearing_error(s.x, s.y, s.heading, tx, ty);
      const double steer_target = path_follow_pid(err, follow_state, follower, dt_ctrl);
      motor_cmd = actuation::steering_pi(steer_target, column.angle, servo, act, dt_ctrl);
      const double a_des = cc_control(5.0, s.speed(), cc, lon, dt_ctrl);
      const auto cmd = actuation::longitudinal_actuation(a_des, s, p, act, 0.0);
      inputs.throttle = cmd.throttle;
      const double torque = actuation::brake_torque_from_duty(act, cmd.brake_duty);
      inputs.brake_front = torque * p.brake_front_share;
      inputs.brake_rear = torque * (1.0 - p.brake_front_share);
      inputs.gear = p.gear_for_speed(s.speed());
    }
    // The steering column is physical: it advances every plant step with the
    // motor command held between control samples.
    inputs.steer_front = actuation::steering_plant(motor_cmd, column, act, dt);
    s = dynamics::integrate_step(s, inputs, p, dt);
    if (settled_at < 0.0 && std::abs(s.y) < 0.3) settled_at = k * dt;
    if (settled_at >= 0.0 && std::abs(s.y) >= 0.3) stayed = false;
  }

  CHECK(path.complete);
  REQUIRE(settled_at > 0.0);
  CHECK(stayed);
  CHECK(std::abs(s.vy) < 0.5);
}
