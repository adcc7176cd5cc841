#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "lcvsim/dynamics/engine_map.hpp"
#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/kv_file.hpp"

namespace lcvsim::dynamics {

enum class DrivenAxle { kFront, kRear };

/// All plant constants of the single-track model: mass, geometry, tire
/// stiffnesses, aero and rolling coefficients, driveline and the static
/// engine map. Loaded from a flat key-value file; see data/vehicle/.
struct VehicleParameters {
  double mass = 2000.0;                 // m [kg]
  double yaw_inertia = 3200.0;          // I_z [kg m^2]
  double lf = 1.25;                     // CG to front axle [m]
  double lr = 1.65;                     // CG to rear axle [m]
  double frontal_area = 3.2;            // A [m^2]
  double air_density = 1.225;           // rho [kg/m^3]
  double drag_coeff = 0.36;             // C_d
  double rolling_coeff = 0.012;         // C_rr
  double gravity = 9.81;                // g [m/s^2]
  double wheel_inertia = 1.8;           // I_w, per-axle lumped [kg m^2]
  double wheel_radius = 0.32;           // R_w, effective [m]
  double cx_front = 160000.0;           // C_xf [N / unit slip]
  double cx_rear = 160000.0;            // C_xr
  double cy_front = 75000.0;            // C_yf [N/rad]
  double cy_rear = 80000.0;             // C_yr
  double friction = 0.9;                // mu
  double driveline_efficiency = 0.92;   // eta_t
  std::vector<double> gear_ratios = {13.0, 8.2, 5.4, 4.0, 3.2};
  /// Minimum speed [m/s] at which each gear engages; gear g is selected as
  /// the highest index with speed >= shift_speeds[g].
  std::vector<double> shift_speeds = {0.0, 5.5, 10.0, 15.0, 20.5};
  DrivenAxle driven_axle = DrivenAxle::kFront;
  double brake_front_share = 0.7;       // fraction of total brake torque
  double body_length = 5.0;             // footprint [m]
  double body_width = 1.88;             // footprint [m]
  EngineMap engine_map;

  double wheelbase() const { return lf + lr; }

  int gear_count() const { return static_cast<int>(gear_ratios.size()); }

  double gear_ratio(int gear) const {
    if (gear < 0 || gear >= gear_count()) {
      throw ConfigError("invalid gear index " + std::to_string(gear));
    }
    return gear_ratios[static_cast<std::size_t>(gear)];
  }

  /// Speed-threshold shift schedule; a pure function of speed.
  int gear_for_speed(double speed) const {
    int gear = 0;
    for (std::size_t g = 1; g < shift_speeds.size(); ++g) {
      if (speed >= shift_speeds[g]) gear = static_cast<int>(g);
    }
    return gear;
  }

  /// Engine speed [rpm] implied by the driven-axle speed in the given gear.
  double engine_rpm(double omega_driven, int gear) const {
    return omega_driven * gear_ratio(gear) * 60.0 / (2.0 * std::numbers::pi);
  }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string("parameter ") + name + " must be strictly positive");
      }
    };
    positive(mass, "m");
    positive(yaw_inertia, "I_z");
    positive(lf, "l_f");
    positive(lr, "l_r");
    positive(frontal_area, "A");
    positive(air_density, "rho");
    positive(drag_coeff, "C_d");
    positive(gravity, "g");
    positive(wheel_inertia, "I_w");
    positive(wheel_radius, "R_w");
    positive(cx_front, "C_xf");
    positive(cx_rear, "C_xr");
    positive(cy_front, "C_yf");
    positive(cy_rear, "C_yr");
    positive(body_length, "body_length");
    positive(body_width, "body_width");
    if (!(rolling_coeff >= 0.0 && rolling_coeff < 1.0)) {
      throw ConfigError("C_rr must lie in [0, 1)");
    }
    if (!(friction > 0.0 && friction <= 2.0)) {
      throw ConfigError("mu must lie in (0, 2]");
    }
    if (!(driveline_efficiency > 0.0 && driveline_efficiency <= 1.0)) {
      throw ConfigError("eta_t must lie in (0, 1]");
    }
    if (gear_ratios.empty()) throw ConfigError("gear_ratios must not be empty");
    for (const double r : gear_ratios) positive(r, "gear ratio");
    if (shift_speeds.size() != gear_ratios.size()) {
      throw ConfigError("shift_speeds must have one entry per gear");
    }
    for (std::size_t g = 1; g < shift_speeds.size(); ++g) {
      if (!(shift_speeds[g] > shift_speeds[g - 1])) {
        throw ConfigError("shift_speeds must be strictly increasing");
      }
    }
    if (!(brake_front_share >= 0.0 && brake_front_share <= 1.0)) {
      throw ConfigError("brake_front_share must lie in [0, 1]");
    }
    if (engine_map.empty()) throw ConfigError("engine map not loaded");
  }

  /// Reads the plant keys from an already-parsed key-value section. The
  /// engine map path is resolved relative to `base_dir`.
  static VehicleParameters from_section(const KvSection& kv,
                                        const std::filesystem::path& base_dir) {
    VehicleParameters p;
    p.mass = kv.get_double("m", p.mass);
    p.yaw_inertia = kv.get_double("I_z", p.yaw_inertia);
    p.lf = kv.get_double("l_f", p.lf);
    p.lr = kv.get_double("l_r", p.lr);
    p.frontal_area = kv.get_double("A", p.frontal_area);
    p.air_density = kv.get_double("rho", p.air_density);
    p.drag_coeff = kv.get_double("C_d", p.drag_coeff);
    p.rolling_coeff = kv.get_double("C_rr", p.rolling_coeff);
    p.gravity = kv.get_double("g", p.gravity);
    p.wheel_inertia = kv.get_double("I_w", p.wheel_inertia);
    p.wheel_radius = kv.get_double("R_w", p.wheel_radius);
    p.cx_front = kv.get_double("C_xf", p.cx_front);
    p.cx_rear = kv.get_double("C_xr", p.cx_rear);
    p.cy_front = kv.get_double("C_yf", p.cy_front);
    p.cy_rear = kv.get_double("C_yr", p.cy_rear);
    p.friction = kv.get_double("mu", p.friction);
    p.driveline_efficiency = kv.get_double("eta_t", p.driveline_efficiency);
    if (kv.has("gear_ratios")) p.gear_ratios = kv.get_list("gear_ratios");
    if (kv.has("shift_speeds")) p.shift_speeds = kv.get_list("shift_speeds");
    if (const auto axle = kv.get_string("driven_axle")) {
      const auto t = trim(*axle);
      if (t == "front") {
        p.driven_axle = DrivenAxle::kFront;
      } else if (t == "rear") {
        p.driven_axle = DrivenAxle::kRear;
      } else {
        throw ConfigError("driven_axle must be 'front' or 'rear'");
      }
    }
    p.brake_front_share = kv.get_double("brake_front_share", p.brake_front_share);
    p.body_length = kv.get_double("body_length", p.body_length);
    p.body_width = kv.get_double("body_width", p.body_width);
    const auto map_path = kv.require_string("engine_map");
    p.engine_map = EngineMap::load_file((base_dir / map_path).string());
    p.validate();
    return p;
  }
};

}  // namespace lcvsim::dynamics
