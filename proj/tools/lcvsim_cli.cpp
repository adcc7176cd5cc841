// Command-line front end for the simulation stack.
//
//   lcvsim run      --scenario NAME|PATH [--out DIR] [--seed N] [--quiet]
//   lcvsim validate --scenario NAME|PATH [--quiet]
//   lcvsim plot     --trace trace.csv [--out DIR] [--quiet]
//   lcvsim sweep    --scenario NAME|PATH --key SECTION.KEY --values A,B,...
//                   [--out DIR] [--seed N] [--quiet]
//
// Exit codes: 0 the run(s) passed, 1 a scenario ran but failed its
// evaluation, 2 anything else went wrong (bad arguments, unreadable or
// invalid files).

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcvsim/harness/outputs.hpp"
#include "lcvsim/harness/scenario.hpp"
#include "lcvsim/harness/simulate.hpp"
#include "lcvsim/util/kv_file.hpp"
#include "lcvsim/util/text.hpp"

namespace fs = std::filesystem;
using namespace lcvsim;

namespace {

#ifndef LCVSIM_DATA_DIR
#define LCVSIM_DATA_DIR "data"
#endif

constexpr int kExitPass = 0;
constexpr int kExitScenarioFailed = 1;
constexpr int kExitError = 2;

/// Resolves a scenario argument: an existing path wins; otherwise the name
/// (with or without .ini) is looked up in the data root's scenario folder.
fs::path resolve_scenario(const std::string& arg, const fs::path& data_root) {
  if (fs::exists(arg)) return arg;
  const fs::path dir = data_root / "scenarios";
  for (const auto& candidate : {dir / arg, dir / (arg + ".ini")}) {
    if (fs::exists(candidate)) return candidate;
  }
  throw ConfigError("no scenario '" + arg + "' (tried the path itself and " +
                    dir.string() + ")");
}

struct CommonArgs {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  fs::path data_root = LCVSIM_DATA_DIR;
};

void print_result(const harness::RunResult& result, bool quiet) {
  if (quiet) return;
  for (const auto& m : result.metrics) {
    std::printf("%s = %s\n", m.name.c_str(), format_double(m.value).c_str());
  }
  if (result.aborted) {
    std::printf("aborted: %s\n", result.failure_reason.c_str());
  } else {
    std::printf("verdict: %s\n", result.passed ? "pass" : "fail");
    if (!result.passed && !result.failure_reason.empty()) {
      std::printf("reason: %s\n", result.failure_reason.c_str());
    }
  }
}

int cmd_run(const CommonArgs& args) {
  const fs::path path = resolve_scenario(args.scenario, args.data_root);
  harness::Scenario scenario = harness::load_scenario(path.string());
  if (args.seed) scenario.seed = *args.seed;

  const auto out = harness::run_scenario(scenario);
  const std::string dir =
      args.out.empty() ? (fs::path("out") / scenario.name).string() : args.out;
  const auto written = harness::emit_outputs(out.trace, out.result, dir);
  if (!args.quiet) {
    for (const auto& file : written) std::printf("wrote %s\n", file.c_str());
  }
  print_result(out.result, args.quiet);
  return out.result.passed ? kExitPass : kExitScenarioFailed;
}

int cmd_validate(const CommonArgs& args) {
  const fs::path path = resolve_scenario(args.scenario, args.data_root);
  const auto scenario = harness::load_scenario(path.string());
  if (!args.quiet) {
    std::printf("ok: %s (%s, %s s, seed %llu)\n", scenario.name.c_str(),
                harness::to_string(scenario.kind).c_str(),
                format_double(scenario.duration).c_str(),
                static_cast<unsigned long long>(scenario.seed));
  }
  return kExitPass;
}

int cmd_plot(const std::string& trace_path, const std::string& out,
             bool quiet) {
  const auto trace = harness::read_csv_file(trace_path);
  const std::string dir =
      out.empty() ? fs::path(trace_path).parent_path().string() : out;
  std::error_code ec;
  fs::create_directories(dir.empty() ? "." : dir, ec);
  if (ec) throw InputDomainError("cannot create '" + dir + "': " + ec.message());
  const auto written = harness::emit_plots(trace, dir.empty() ? "." : dir);
  if (!quiet) {
    for (const auto& file : written) std::printf("wrote %s\n", file.c_str());
  }
  return kExitPass;
}

int cmd_sweep(const CommonArgs& args, const std::string& key,
              const std::vector<std::string>& values) {
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size()) {
    throw ConfigError("--key must be SECTION.KEY, got '" + key + "'");
  }
  const std::string section = key.substr(0, dot);
  const std::string entry = key.substr(dot + 1);
  if (values.empty()) throw ConfigError("--values must list at least one value");

  const fs::path path = resolve_scenario(args.scenario, args.data_root);
  const std::string base_name = path.stem().string();

  const std::string dir = args.out.empty() ? "out" : args.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputDomainError("cannot create '" + dir + "': " + ec.message());
  const std::string summary_path =
      (fs::path(dir) / "sweep_summary.csv").string();
  std::ofstream summary(summary_path);
  if (!summary) {
    throw InputDomainError("cannot open for writing: " + summary_path);
  }

  bool all_passed = true;
  bool header_written = false;
  for (const auto& value : values) {
    // Fresh parse per run: consumption tracking is per IniFile instance.
    IniFile ini = IniFile::load_file(path.string());
    ini.set(section, entry, value);
    harness::Scenario scenario =
        harness::Scenario::from_ini(ini, path.parent_path(), base_name);
    if (args.seed) scenario.seed = *args.seed;

    const auto out = harness::run_scenario(scenario);
    if (!header_written) {
      summary << key << ",passed";
      for (const auto& m : out.result.metrics) summary << ',' << m.name;
      summary << '\n';
      header_written = true;
    }
    summary << value << ',' << (out.result.passed ? 1 : 0);
    for (const auto& m : out.result.metrics) {
      summary << ',' << format_double(m.value);
    }
    summary << '\n';
    if (!args.quiet) {
      std::printf("%s = %s: %s\n", key.c_str(), value.c_str(),
                  out.result.passed
                      ? "pass"
                      : (out.result.aborted ? "aborted" : "fail"));
    }
    all_passed = all_passed && out.result.passed;
  }
  if (!args.quiet) std::printf("wrote %s\n", summary_path.c_str());
  return all_passed ? kExitPass : kExitScenarioFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic light-commercial-vehicle simulation stack"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string trace_path;
  std::string sweep_key;
  std::vector<std::string> sweep_values;

  const auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
    if (needs_scenario) {
      cmd->add_option("--scenario", args.scenario,
                      "Scenario name (looked up in the data folder) or path")
          ->required();
    }
    cmd->add_option("--data", args.data_root,
                    "Data root holding scenarios/ (default: built-in)");
    cmd->add_flag("--quiet", args.quiet, "Suppress progress output");
  };

  auto* run = app.add_subcommand("run", "Run a scenario and write artifacts");
  add_common(run, true);
  run->add_option("--out", args.out, "Output directory (default out/<name>)");
  run->add_option("--seed", args.seed, "Override the scenario seed");

  auto* validate =
      app.add_subcommand("validate", "Load and fully check a scenario file");
  add_common(validate, true);

  auto* plot = app.add_subcommand("plot", "Render figures from a trace CSV");
  plot->add_option("--trace", trace_path, "Path to a trace.csv")->required();
  plot->add_option("--out", args.out,
                   "Output directory (default: next to the trace)");
  plot->add_flag("--quiet", args.quiet, "Suppress progress output");

  auto* sweep = app.add_subcommand(
      "sweep", "Run a scenario once per value of one overridden key");
  add_common(sweep, true);
  sweep->add_option("--key", sweep_key, "INI entry to vary, as SECTION.KEY")
      ->required();
  sweep
      ->add_option("--values", sweep_values,
                   "Comma-separated list of values for the key")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", args.out,
                    "Directory for sweep_summary.csv (default out/)");
  sweep->add_option("--seed", args.seed, "Override the scenario seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(args);
    if (validate->parsed()) return cmd_validate(args);
    if (plot->parsed()) return cmd_plot(trace_path, args.out, args.quiet);
    if (sweep->parsed()) return cmd_sweep(args, sweep_key, sweep_values);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
