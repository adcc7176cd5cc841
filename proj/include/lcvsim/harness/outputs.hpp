#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lcvsim/harness/metrics.hpp"
#include "lcvsim/harness/simulate.hpp"
#include "lcvsim/harness/svg.hpp"
#include "lcvsim/harness/trace.hpp"
#include "lcvsim/util/errors.hpp"

namespace lcvsim::harness {

/// Scenario kind implied by a trace's column set; the schema is a pure
/// function of the kind, so this inversion is exact.
inline ScenarioKind infer_kind(const Trace& trace) {
  if (trace.has("speed_delta")) return ScenarioKind::kCaccFollow;
  if (trace.has("corridor_lo")) return ScenarioKind::kDoubleLaneChange;
  if (trace.has("target_index")) return ScenarioKind::kWaypointFollow;
  return ScenarioKind::kOpenLoopReplay;
}

/// Renders the figure set for a trace into `directory`: a trajectory map
/// with travel direction, the speed curves, and the steering/yaw/lateral
/// acceleration curves; following runs add the velocity-difference and
/// spacing-error curves. Returns the written paths.
inline std::vector<std::string> emit_plots(const Trace& trace,
                                           const std::string& directory) {
  namespace fs = std::filesystem;
  const ScenarioKind kind = infer_kind(trace);
  std::vector<std::string> written;
  auto target = [&](const char* name) {
    written.push_back((fs::path(directory) / name).string());
    return written.back();
  };

  {
    LinePlot plot("Trajectory", "x [m]", "y [m]");
    plot.equal_aspect(true);
    auto& ego = plot.add_series("ego", trace.column("x"), trace.column("y"));
    ego.arrows = true;
    if (kind == ScenarioKind::kCaccFollow) {
      plot.add_series("lead", trace.column("lead_x"), trace.column("lead_y"));
    }
    if (kind == ScenarioKind::kDoubleLaneChange) {
      auto& lo = plot.add_series("corridor", trace.column("x"),
                                 trace.column("corridor_lo"));
      lo.dashed = true;
      lo.color = "#555555";
      auto& hi =
          plot.add_series("", trace.column("x"), trace.column("corridor_hi"));
      hi.dashed = true;
      hi.color = "#555555";
    }
    plot.render_file(target("trajectory.svg"));
  }

  {
    LinePlot plot("Speed", "t [s]", "speed [m/s]");
    plot.add_series("ego", trace.column("t"), trace.column("speed"));
    plot.add_series("gps", trace.column("t"), trace.column("gps_speed"));
    if (kind == ScenarioKind::kCaccFollow) {
      plot.add_series("lead", trace.column("t"), trace.column("lead_speed"));
    }
    plot.render_file(target("speeds.svg"));
  }

  {
    LinePlot plot("Handling", "t [s]", "steer [rad] / yaw rate [rad/s] / a_y [m/s^2]");
    plot.add_series("steer angle", trace.column("t"),
                    trace.column("steer_angle"));
    plot.add_series("yaw rate", trace.column("t"), trace.column("yaw_rate"));
    plot.add_series("lateral accel", trace.column("t"), trace.column("ay"));
    plot.render_file(target("handling.svg"));
  }

  if (kind == ScenarioKind::kCaccFollow) {
    {
      LinePlot plot("Speed difference to lead", "t [s]", "v_lead - v_ego [m/s]");
      plot.add_series("speed delta", trace.column("t"),
                      trace.column("speed_delta"));
      plot.render_file(target("speed_delta.svg"));
    }
    {
      LinePlot plot("Spacing error", "t [s]", "error [m]");
      plot.add_series("spacing error", trace.column("t"),
                      trace.column("spacing_error"));
      plot.render_file(target("spacing.svg"));
    }
  }
  return written;
}

/// Writes the full artifact set of a run: trace.csv (fixed schema, full
/// float precision), metrics.txt (run metrics plus the pass verdict), and
/// the figure files. Returns the written paths.
inline std::vector<std::string> emit_outputs(const Trace& trace,
                                             const RunResult& result,
                                             const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) {
    throw InputDomainError("cannot create output directory '" + directory +
                           "': " + ec.message());
  }

  std::vector<std::string> written;
  const auto trace_path = (fs::path(directory) / "trace.csv").string();
  write_csv_file(trace, trace_path);
  written.push_back(trace_path);

  Metrics metrics = result.metrics;
  metrics.push_back({"passed", result.passed ? 1.0 : 0.0});
  metrics.push_back({"aborted", result.aborted ? 1.0 : 0.0});
  const auto metrics_path = (fs::path(directory) / "metrics.txt").string();
  write_metrics_file(metrics, metrics_path);
  written.push_back(metrics_path);

  for (auto& path : emit_plots(trace, directory)) {
    written.push_back(std::move(path));
  }
  return written;
}

}  // namespace lcvsim::harness
