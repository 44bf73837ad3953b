#pragma once
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/scenario.hpp"

namespace gpd {

struct RunResult {
  RunConfig cfg;
  ScenarioResult scenario;
  std::string out_dir;
  std::vector<std::string> snapshot_paths;
  std::string metrics_path;
  std::string rates_path;
  std::string summary_path;
};

// Executes the configured scenario and writes snapshots, the crack-metrics
// time series and a one-row (or, for static sweeps, one-row-per-member)
// summary into out_dir. out_dir_override empty => config [output] dir.
RunResult run_scenario(const RunConfig& cfg,
                       const std::string& out_dir_override = "");

// One run per value of `key` (e.g. "R_over_t", "v_e"); each member writes to
// <out>/run_<key>_<value>/ and the sweep writes a combined summary.
struct SweepResult {
  std::vector<RunResult> members;
  std::string summary_path;
};
SweepResult run_sweep(const RunConfig& base, const std::string& key,
                      const std::vector<std::string>& values,
                      const std::string& out_dir_override = "");

struct CalibrationReport {
  double delta = 0.0;
  double c = 0.0;            // micromodulus for the configured mode
  double s0_from_G0 = 0.0;
  double s0_from_KI = 0.0;
  double G0_implied_by_KI = 0.0;
  bool table_inconsistent = false;  // G0 vs K_I^2/E disagree beyond 1%
  double s0_used = 0.0;
  double stable_dt = 0.0;    // interior-lattice bound at dt_safety
  double beta = 0.0;         // floating-beam decay parameter
  double x_rm = -1.0;        // oracle moat distance; -1 when beam too short
};

CalibrationReport calibrate(const RunConfig& cfg);
std::string format_calibration(const CalibrationReport& rep);

}  // namespace gpd
