#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lcvsim/harness/corridor.hpp"
#include "lcvsim/harness/geo.hpp"
#include "lcvsim/harness/lead.hpp"
#include "lcvsim/harness/metrics.hpp"
#include "lcvsim/harness/svg.hpp"
#include "lcvsim/harness/trace.hpp"

using namespace lcvsim;
using namespace lcvsim::harness;
using Catch::Approx;

namespace {

Trace make_trace(std::vector<std::string> columns,
                 const std::vector<std::vector<double>>& rows) {
  Trace trace(std::move(columns));
  for (const auto& row : rows) trace.add_row(row);
  return trace;
}

std::size_t count_occurrences(const std::string& text,
                              const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

// --- Trace -----------------------------------------------------------------

TEST_CASE("trace stores rows and resolves columns") {
  auto trace = make_trace({"t", "x"}, {{0.0, 1.0}, {0.1, 2.0}});
  CHECK(trace.rows() == 2);
  CHECK(trace.at(1, 1) == 2.0);
  CHECK(trace.find("x") == 1);
  CHECK(trace.find("nope") == Trace::npos);
  CHECK(trace.has("t"));
  CHECK_FALSE(trace.has("nope"));
  CHECK(trace.require("x") == 1);
  CHECK(trace.column("x") == std::vector<double>{1.0, 2.0});
}

TEST_CASE("missing required column is a schema error") {
  const auto trace = make_trace({"t"}, {{0.0}});
  CHECK_THROWS_AS(trace.require("speed"), SchemaError);
  CHECK_THROWS_AS(trace.column("speed"), SchemaError);
}

TEST_CASE("row width must match the schema") {
  Trace trace({"a", "b"});
  const std::vector<double> narrow = {1.0};
  CHECK_THROWS_AS(trace.add_row(narrow), InputDomainError);
}

TEST_CASE("csv round-trip preserves values exactly") {
  const auto trace = make_trace(
      {"t", "value", "gap"},
      {{0.0, -1.25, std::nan("")},
       {0.1, 3.0e-17, 7.0},
       {0.2, 123456.789012345, -0.0}});
  std::stringstream ss;
  write_csv(trace, ss);
  const auto back = read_csv(ss);

  REQUIRE(back.columns() == trace.columns());
  REQUIRE(back.rows() == trace.rows());
  for (std::size_t r = 0; r < trace.rows(); ++r) {
    for (std::size_t c = 0; c < trace.columns().size(); ++c) {
      const double a = trace.at(r, c);
      const double b = back.at(r, c);
      if (std::isnan(a)) {
        CHECK(std::isnan(b));
      } else {
        CHECK(a == b);  // bit-exact via shortest round-trip formatting
      }
    }
  }

  // And the second write is byte-identical to the first.
  std::stringstream again;
  write_csv(back, again);
  CHECK(ss.str() == again.str());
}

TEST_CASE("empty trace writes a header-only csv") {
  const Trace trace({"t", "x"});
  std::stringstream ss;
  write_csv(trace, ss);
  CHECK(ss.str() == "t,x\n");
  const auto back = read_csv(ss);
  CHECK(back.columns() == trace.columns());
  CHECK(back.rows() == 0);
}

TEST_CASE("csv parse errors carry line numbers") {
  std::stringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(ragged), ParseError);
  std::stringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), ParseError);
  std::stringstream junk("a,b\n1,zzz\n");
  CHECK_THROWS_AS(read_csv(junk), ParseError);
}

// --- Corridor --------------------------------------------------------------

TEST_CASE("corridor file scales widths by the vehicle width") {
  std::stringstream course(
      "# gate table\n"
      "0 15 0.0 1.1 0.25\n"
      "45 70 3.5 1.2 0.25\n");
  const auto corridor = Corridor::load(course, 2.0);
  REQUIRE(corridor.sections().size() == 2);
  CHECK(corridor.sections()[0].width == Approx(2.45));
  CHECK(corridor.sections()[1].width == Approx(2.65));
  CHECK(corridor.sections()[1].center_y == 3.5);
  CHECK(corridor.course_start() == 0.0);
  CHECK(corridor.course_end() == 70.0);

  CHECK(corridor.section_at(10.0) == &corridor.sections()[0]);
  CHECK(corridor.section_at(30.0) == nullptr);  // gap between gates
  CHECK(corridor.section_at(50.0) == &corridor.sections()[1]);
  CHECK(corridor.section_at(-1.0) == nullptr);
  CHECK(corridor.section_at(71.0) == nullptr);
}

TEST_CASE("corridor rejects malformed courses") {
  std::stringstream backwards("10 0 0.0 1.0 0.0\n");
  CHECK_THROWS_AS(Corridor::load(backwards, 2.0), ConfigError);
  std::stringstream overlapping("0 20 0.0 1.0 0.0\n10 30 0.0 1.0 0.0\n");
  CHECK_THROWS_AS(Corridor::load(overlapping, 2.0), ConfigError);
  std::stringstream negative("0 10 0.0 0.0 -1.0\n");
  CHECK_THROWS_AS(Corridor::load(negative, 2.0), ConfigError);
  std::stringstream ragged("0 10 0.0 1.0\n");
  CHECK_THROWS_AS(Corridor::load(ragged, 2.0), ParseError);
}

TEST_CASE("shipped lane-change course matches its construction rule") {
  const auto corridor = Corridor::load_file(
      LCVSIM_DATA_DIR "/corridors/iso3888_1.txt", 1.88);
  REQUIRE(corridor.sections().size() == 3);
  CHECK(corridor.sections()[0].x_start == 0.0);
  CHECK(corridor.sections()[0].x_end == 15.0);
  CHECK(corridor.sections()[0].width == Approx(1.1 * 1.88 + 0.25));
  CHECK(corridor.sections()[1].center_y == Approx(3.5));
  CHECK(corridor.sections()[2].width == Approx(1.3 * 1.88 + 0.25));
  CHECK(corridor.course_end() == Approx(110.0));
}

TEST_CASE("footprint corners rotate with the heading") {
  const double L = 4.0, W = 2.0;
  const auto straight = footprint_corners(10.0, 5.0, 0.0, L, W);
  CHECK(straight[0].first == Approx(12.0));   // front-left
  CHECK(straight[0].second == Approx(6.0));
  CHECK(straight[2].first == Approx(8.0));    // rear-right
  CHECK(straight[2].second == Approx(4.0));

  // Rotated by 90 degrees the length lies along y.
  const auto turned = footprint_corners(0.0, 0.0, M_PI / 2.0, L, W);
  for (const auto& [x, y] : turned) {
    CHECK(std::abs(x) == Approx(W / 2.0));
    CHECK(std::abs(y) == Approx(L / 2.0));
  }

  // Any rotation preserves the diagonal half-length.
  const auto skewed = footprint_corners(3.0, -2.0, 0.7, L, W);
  for (const auto& [x, y] : skewed) {
    CHECK(std::hypot(x - 3.0, y + 2.0) == Approx(std::hypot(L / 2, W / 2)));
  }
}

TEST_CASE("centered straight run passes with the analytic margin") {
  std::stringstream course("0 30 1.0 1.0 2.0\n");  // width 4 around y = 1
  const auto corridor = Corridor::load(course, 2.0);
  const auto trace = make_trace({"x", "y", "heading"},
                                {{5.0, 1.0, 0.0},
                                 {15.0, 1.0, 0.0},
                                 {25.0, 1.0, 0.0},
                                 {50.0, 9.0, 0.0}});  // outside any gate
  const auto eval = evaluate_dlc(trace, corridor, 4.0, 2.0);
  CHECK(eval.pass);
  CHECK(eval.max_exceedance == 0.0);
  // Body half-width 1 inside half-gate 2 leaves exactly 1 m per side.
  CHECK(eval.min_margin == Approx(1.0));
  CHECK(eval.rows_in_sections == 3);
}

TEST_CASE("offset run reports the exact protrusion") {
  std::stringstream course("0 30 0.0 0.0 4.0\n");  // fixed width 4
  const auto corridor = Corridor::load(course, 2.0);
  // Top corner sits at y_cg + 1; placing y_cg at 2 protrudes exactly 1 m.
  const auto trace =
      make_trace({"x", "y", "heading"}, {{15.0, 2.0, 0.0}});
  const auto eval = evaluate_dlc(trace, corridor, 4.0, 2.0);
  CHECK_FALSE(eval.pass);
  CHECK(eval.max_exceedance == Approx(1.0));
  CHECK(eval.min_margin == Approx(-1.0));
}

TEST_CASE("yawed footprint uses the rotated lateral extent") {
  std::stringstream course("0 40 0.0 0.0 6.0\n");  // fixed width 6
  const auto corridor = Corridor::load(course, 2.0);
  const double theta = 0.05;
  const auto trace =
      make_trace({"x", "y", "heading"}, {{20.0, 0.0, theta}});
  const double L = 5.0, W = 1.88;
  const auto eval = evaluate_dlc(trace, corridor, L, W);
  const double extent =
      (L / 2.0) * std::sin(theta) + (W / 2.0) * std::cos(theta);
  CHECK(eval.min_margin == Approx(3.0 - extent).epsilon(1e-12));
}

TEST_CASE("trace without pose columns cannot be evaluated") {
  std::stringstream course("0 30 0.0 1.0 4.0\n");
  const auto corridor = Corridor::load(course, 2.0);
  const auto trace = make_trace({"t", "speed"}, {{0.0, 10.0}});
  CHECK_THROWS_AS(evaluate_dlc(trace, corridor, 4.0, 2.0), SchemaError);
  const auto posed = make_trace({"x", "y", "heading"}, {{1.0, 0.0, 0.0}});
  CHECK_THROWS_AS(evaluate_dlc(posed, corridor, 0.0, 2.0), InputDomainError);
}

// --- Metrics ---------------------------------------------------------------

TEST_CASE("metrics serialize as name = value lines") {
  const Metrics metrics = {{"alpha", 1.5}, {"beta", -0.25}};
  std::stringstream ss;
  write_metrics(metrics, ss);
  CHECK(ss.str() == "alpha = 1.5\nbeta = -0.25\n");
  CHECK(metric_value(metrics, "beta") == -0.25);
  CHECK_THROWS_AS(metric_value(metrics, "gamma"), InputDomainError);
}

TEST_CASE("peak_abs and completion_time read the right columns") {
  const auto trace = make_trace(
      {"t", "yaw_rate", "path_complete"},
      {{0.0, 0.1, 0.0}, {0.1, -0.9, 0.0}, {0.2, 0.4, 1.0}, {0.3, 0.0, 1.0}});
  CHECK(peak_abs(trace, "yaw_rate") == Approx(0.9));
  CHECK(completion_time(trace) == Approx(0.2));

  const auto never = make_trace({"t", "path_complete"}, {{0.0, 0.0}});
  CHECK(completion_time(never) == -1.0);
}

TEST_CASE("convergence summary matches the exponential-decay oracle") {
  // dv(t) = 2 exp(-t); |dv| crosses the 0.2 band at t = ln(10).
  const std::vector<std::string> cols = {"t", "speed", "lead_speed",
                                         "spacing_error"};
  Trace trace(cols);
  const double dt = 0.01;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i * dt;
    const double dv = 2.0 * std::exp(-t);
    const std::array<double, 4> row = {t, 15.0 - dv, 15.0, 0.5 * dv};
    trace.add_row(row);
  }
  const auto s = convergence_summary(trace, 0.2);
  CHECK(s.disturbed);
  CHECK(s.settled);
  CHECK(s.peak_speed_delta == Approx(2.0));
  CHECK(s.settling_time == Approx(std::log(10.0)).margin(0.011));
  CHECK(s.peak_spacing_error == Approx(1.0));
  CHECK(s.final_spacing_error == Approx(0.5 * 2.0 * std::exp(-10.0)));
  // RMS of the decaying error against its analytic time integral.
  const double analytic = std::sqrt((1.0 - std::exp(-20.0)) / (2.0 * 10.0));
  CHECK(s.rms_spacing_error == Approx(analytic).epsilon(0.01));
}

TEST_CASE("quiet and diverging runs classify correctly") {
  const std::vector<std::string> cols = {"t", "speed", "lead_speed",
                                         "spacing_error"};
  Trace quiet(cols);
  for (int i = 0; i < 10; ++i) {
    const std::array<double, 4> row = {i * 0.1, 10.0, 10.05, 0.0};
    quiet.add_row(row);
  }
  const auto q = convergence_summary(quiet, 0.2);
  CHECK_FALSE(q.disturbed);
  CHECK(q.settled);
  CHECK(q.settling_time == 0.0);

  Trace rising(cols);
  for (int i = 0; i < 10; ++i) {
    const std::array<double, 4> row = {i * 0.1, 10.0 - i * 0.1, 10.0, 0.0};
    rising.add_row(row);
  }
  const auto r = convergence_summary(rising, 0.2);
  CHECK(r.disturbed);
  CHECK_FALSE(r.settled);

  CHECK_THROWS_AS(convergence_summary(quiet, 0.0), InputDomainError);
}

// --- SVG plots -------------------------------------------------------------

TEST_CASE("svg renders deterministically and closes closed curves") {
  LinePlot plot("trajectory", "x [m]", "y [m]");
  std::vector<double> xs, ys;
  for (int i = 0; i <= 64; ++i) {
    const double a = 2.0 * M_PI * i / 64.0;
    xs.push_back(10.0 * std::cos(a));
    ys.push_back(10.0 * std::sin(a));
  }
  xs.back() = xs.front();  // exactly closed
  ys.back() = ys.front();
  plot.add_series("path", xs, ys);
  plot.equal_aspect(true);

  std::stringstream first, second;
  plot.render(first);
  plot.render(second);
  CHECK(first.str() == second.str());

  const auto svg = first.str();
  CHECK(count_occurrences(svg, "<polyline") == 1);
  CHECK(svg.find("trajectory") != std::string::npos);
  CHECK(svg.find("x [m]") != std::string::npos);

  // The rendered polyline starts and ends on the same pixel coordinates.
  const auto points_at = svg.find("points=\"");
  REQUIRE(points_at != std::string::npos);
  const auto start = points_at + 8;
  const auto end = svg.find('"', start);
  const auto pts = svg.substr(start, end - start);
  const auto first_pt = pts.substr(0, pts.find(' '));
  const auto last_pt = pts.substr(pts.rfind(' ') + 1);
  CHECK(first_pt == last_pt);
}

TEST_CASE("non-finite samples split a series into strokes") {
  LinePlot plot("gaps", "t", "v");
  std::vector<double> xs, ys;
  for (int i = 0; i < 10; ++i) {
    xs.push_back(i);
    ys.push_back(i == 4 || i == 5 ? std::nan("") : 1.0 * i);
  }
  plot.add_series("broken", xs, ys);
  std::stringstream ss;
  plot.render(ss);
  CHECK(count_occurrences(ss.str(), "<polyline") == 2);
}

TEST_CASE("series length mismatch is rejected") {
  LinePlot plot("bad", "x", "y");
  CHECK_THROWS_AS(plot.add_series("s", {1.0, 2.0}, {1.0}), InputDomainError);
}

// --- Local tangent plane ---------------------------------------------------

TEST_CASE("tangent plane round-trips and matches hand numbers") {
  const LocalTangentPlane ltp(48.0, 11.0);
  const auto [x, y] = ltp.to_local(48.001, 11.002);
  CHECK(x == Approx(148.80806292162123).epsilon(1e-12));
  CHECK(y == Approx(111.19508023327376).epsilon(1e-12));

  const auto [lat, lon] = ltp.to_geodetic(x, y);
  CHECK(lat == Approx(48.001).epsilon(1e-12));
  CHECK(lon == Approx(11.002).epsilon(1e-12));

  const auto [ox, oy] = ltp.to_local(48.0, 11.0);
  CHECK(ox == 0.0);
  CHECK(oy == 0.0);

  CHECK_THROWS_AS(LocalTangentPlane(89.5, 0.0), ConfigError);
  CHECK_THROWS_AS(LocalTangentPlane(0.0, 200.0), ConfigError);
}

// --- Speed profiles and the kinematic lead ----------------------------------

TEST_CASE("speed profile parses, interpolates and holds") {
  const auto p = SpeedProfile::parse("0:10, 10:10, 12:15, 40:15");
  CHECK(p.speed(-1.0) == 10.0);
  CHECK(p.speed(5.0) == 10.0);
  CHECK(p.speed(11.0) == Approx(12.5));
  CHECK(p.speed(12.0) == 15.0);
  CHECK(p.speed(100.0) == 15.0);
  CHECK(p.accel(5.0) == 0.0);
  CHECK(p.accel(11.0) == Approx(2.5));
  CHECK(p.accel(50.0) == 0.0);
}

TEST_CASE("speed profile rejects malformed input") {
  CHECK_THROWS_AS(SpeedProfile::parse("10"), ConfigError);
  CHECK_THROWS_AS(SpeedProfile::parse("a:b"), ConfigError);
  CHECK_THROWS_AS(SpeedProfile::parse("0:5, 0:6"), ConfigError);
  CHECK_THROWS_AS(SpeedProfile::parse("0:-5"), ConfigError);
  CHECK(SpeedProfile::parse("0:-5", true).speed(0.0) == -5.0);
  CHECK_THROWS_AS(SpeedProfile(std::vector<std::pair<double, double>>{}),
                  ConfigError);
}

TEST_CASE("kinematic lead integrates its profile in closed form") {
  const auto profile = SpeedProfile::parse("0:10, 10:10, 12:15, 40:15");
  const KinematicLead lead(profile, 100.0, -3.0, 0.0);

  CHECK(lead.distance_travelled(10.0) == Approx(100.0));
  CHECK(lead.distance_travelled(12.0) == Approx(125.0));
  CHECK(lead.distance_travelled(20.0) == Approx(245.0));

  // Against trapezoid integration of the profile (exact on a piecewise-
  // linear speed when no step straddles a knot).
  double s = 0.0;
  const double dt = 1e-3;
  for (int i = 0; i < 17000; ++i) {
    const double t = i * dt;
    s += 0.5 * (profile.speed(t) + profile.speed(t + dt)) * dt;
  }
  CHECK(lead.distance_travelled(17.0) == Approx(s).epsilon(1e-9));

  CHECK(lead.x(12.0) == Approx(225.0));
  CHECK(lead.y(12.0) == -3.0);
  CHECK(lead.speed(11.0) == Approx(12.5));
  CHECK(lead.accel(11.0) == Approx(2.5));

  // A lead pointed along +y moves in y only.
  const KinematicLead north(profile, 0.0, 0.0, M_PI / 2.0);
  CHECK(north.x(12.0) == Approx(0.0).margin(1e-9));
  CHECK(north.y(12.0) == Approx(125.0));
}
