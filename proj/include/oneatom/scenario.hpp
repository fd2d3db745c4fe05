#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oneatom/pulses.hpp"
#include "oneatom/quadrature.hpp"

namespace oneatom {

enum class RunMode { one_photon, two_photon, decomposition, cross_sections, sweep };

RunMode parse_mode(const std::string& name);  // throws std::invalid_argument
std::string mode_name(RunMode mode);

struct SweepRange {
  double t_min = 0.0;
  double t_max = 0.0;
  int steps = 0;
};

struct ScenarioConfig {
  RunMode mode = RunMode::one_photon;
  double pulse_length_T = 1.0;
  std::optional<SpatialGrid> grid;  // overrides the mode's default grid
  std::vector<double> tau_list;     // empty: defaults chosen by pulse length
  std::optional<SweepRange> sweep;
  std::string output_dir = ".";
  QuadratureSettings quadrature;

  void validate() const;  // throws std::invalid_argument
};

// "min:max:points" -> validated grid; "min:max:steps" -> validated sweep.
SpatialGrid parse_grid_spec(const std::string& spec);
SweepRange parse_sweep_spec(const std::string& spec);

// Plain key = value lines with # comments; keys mirror the long CLI flags
// (mode, pulse-length, tau, grid, sweep, out, tolerance). Values from the
// file overwrite those already present in base. Unknown keys are rejected.
ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base = {});

// Runs one scenario and writes its CSVs plus summary.txt into output_dir.
// Returns 0 on success, 1 on numerical failure (invariant violation or
// non-convergence; the summary flags what failed and no data CSV is
// emitted). Configuration defects throw instead.
int run_scenario(const ScenarioConfig& config);

// Pulse-length sweep behind mode=sweep; requires config.sweep.
int run_sweep(const ScenarioConfig& config);

// Command-line entry point: flag parsing, config file merge, dispatch.
// Exit codes: 0 success, 1 numerical failure, 2 usage or config error.
int cli_main(int argc, const char* const* argv);

}  // namespace oneatom
