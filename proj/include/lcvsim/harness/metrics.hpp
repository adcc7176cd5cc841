#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "lcvsim/harness/trace.hpp"
#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/text.hpp"

namespace lcvsim::harness {

/// One named summary value. Kept as an ordered list so the metrics file is
/// written in a stable, meaningful order.
struct Metric {
  std::string name;
  double value = 0.0;
};

using Metrics = std::vector<Metric>;

inline void write_metrics(const Metrics& metrics, std::ostream& os) {
  for (const auto& m : metrics) {
    os << m.name << " = " << format_double(m.value) << '\n';
  }
}

inline void write_metrics_file(const Metrics& metrics, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw InputDomainError("cannot open for writing: " + path);
  write_metrics(metrics, os);
}

inline double metric_value(const Metrics& metrics, const std::string& name) {
  for (const auto& m : metrics) {
    if (m.name == name) return m.value;
  }
  throw InputDomainError("no metric named '" + name + "'");
}

/// Largest absolute value of one trace column; zero on an empty trace.
inline double peak_abs(const Trace& trace, const std::string& column) {
  const std::size_t c = trace.require(column);
  double peak = 0.0;
  for (std::size_t r = 0; r < trace.rows(); ++r) {
    peak = std::max(peak, std::abs(trace.at(r, c)));
  }
  return peak;
}

/// Time of the first row whose `path_complete` flag is set, or -1 when the
/// course was never finished.
inline double completion_time(const Trace& trace) {
  const std::size_t ct = trace.require("t");
  const std::size_t cc = trace.require("path_complete");
  for (std::size_t r = 0; r < trace.rows(); ++r) {
    if (trace.at(r, cc) != 0.0) return trace.at(r, ct);
  }
  return -1.0;
}

/// Summary of a following run: how the speed difference to the lead evolved
/// and how well the spacing policy was held.
struct ConvergenceSummary {
  double peak_speed_delta = 0.0;  // max |v_lead - v_ego| [m/s]
  /// Time from the delta first leaving the band until it re-enters for good
  /// [s]; zero when it never left.
  double settling_time = 0.0;
  /// The trace ends with the delta inside the band.
  bool settled = true;
  /// The delta left the band at least once.
  bool disturbed = false;
  double peak_spacing_error = 0.0;   // max |e| [m]
  double rms_spacing_error = 0.0;    // [m]
  double final_spacing_error = 0.0;  // [m]
};

/// Computes the speed-convergence summary over a trace with `t`, `speed`,
/// `lead_speed` and `spacing_error` columns. The band is the two-sided
/// threshold on |v_lead - v_ego| that counts as "settled".
inline ConvergenceSummary convergence_summary(const Trace& trace,
                                              double band = 0.2) {
  if (!(band > 0.0)) {
    throw InputDomainError("convergence_summary: band must be positive");
  }
  const std::size_t ct = trace.require("t");
  const std::size_t cv = trace.require("speed");
  const std::size_t cl = trace.require("lead_speed");
  const std::size_t ce = trace.require("spacing_error");

  ConvergenceSummary out;
  const std::size_t rows = trace.rows();
  if (rows == 0) return out;

  std::size_t first_out = rows;
  std::size_t last_out = rows;
  double sq_sum = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double dv = trace.at(r, cl) - trace.at(r, cv);
    out.peak_speed_delta = std::max(out.peak_speed_delta, std::abs(dv));
    if (std::abs(dv) > band) {
      if (first_out == rows) first_out = r;
      last_out = r;
    }
    const double e = trace.at(r, ce);
    out.peak_spacing_error = std::max(out.peak_spacing_error, std::abs(e));
    sq_sum += e * e;
  }
  out.rms_spacing_error = std::sqrt(sq_sum / static_cast<double>(rows));
  out.final_spacing_error = trace.at(rows - 1, ce);

  if (first_out < rows) {
    out.disturbed = true;
    out.settled = last_out + 1 < rows;
    const std::size_t reentry = std::min(last_out + 1, rows - 1);
    out.settling_time = trace.at(reentry, ct) - trace.at(first_out, ct);
  }
  return out;
}

}  // namespace lcvsim::harness
