#pragma once
#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/beam_oracle.hpp"
#include "core/config.hpp"
#include "core/solver.hpp"
#include "core/stress.hpp"

namespace gpd {

// A composed experiment: model plus the probe regions its metrics use.
struct BuiltScenario {
  std::unique_ptr<Model> model;
  std::vector<int> top_surface;  // upper-surface probe region, clamp excluded
  std::vector<int> free_end;     // last physical column
  double domain_height = 0.0;
  double base_end_x = 0.0;       // rightmost supported base coordinate
};

BuiltScenario build_front_collapse(const RunConfig& cfg, double R_over_t);
BuiltScenario build_foot_loosening(const RunConfig& cfg);

struct SweepMemberResult {
  double R_over_t = 0.0;
  double sigma_max = 0.0;
  Vec2 sigma_location;
  double tip_displacement = 0.0;  // max |u| over the free-end column
  Vec2 tip_location;
  int relax_iterations = 0;
};

struct ProbeSample {
  int stage = 0;
  double time = 0.0;
  double eroded_length = 0.0;
  double sigma_max = 0.0;
  Vec2 sigma_location;
  double crack_length = 0.0;
  std::int64_t total_breaks = 0;
};

struct CrackMetrics {
  double initiation_time = -1.0;  // < 0 when no crack nucleated
  Vec2 initiation_site;
  double initiation_eroded_length = -1.0;
  int pre_initiation_damage_count = 0;  // points with 0 < phi < threshold
  // (time, erosion_length, crack_length)
  std::vector<std::array<double, 3>> series;
  // (erosion_length, d crack_length / dt)
  std::vector<std::array<double, 2>> growth_rate;
};

// Longest connected chain of points with phi >= threshold, 8-neighbor grid
// connectivity, measured as geodesic end-to-end arc length along the chain.
double crack_length(const std::vector<double>& damage,
                    const MaterialPointSet& points, double threshold);

// Centered finite differences of crack_length w.r.t. time, reported against
// erosion length. Requires at least 3 samples.
std::vector<std::array<double, 2>> crack_growth_rate(const CrackMetrics& m);

struct ScenarioResult {
  std::vector<SweepMemberResult> sweep;          // static-sweep mode
  std::vector<ProbeSample> probes;               // erosion-mode stage series
  CrackMetrics metrics;
  double x_rm = -1.0;                            // measured moat distance
  double last_pre_fracture_sigma_max = 0.0;
  Vec2 last_pre_fracture_sigma_location;
};

using SnapshotSink =
    std::function<void(const Model&, const SimulationState&,
                       const VirialStressField&, int stage)>;

ScenarioResult run_front_collapse(const RunConfig& cfg,
                                  const SnapshotSink& sink = {});
ScenarioResult run_foot_loosening(const RunConfig& cfg,
                                  const SnapshotSink& sink = {});

// One run per config; configs must differ only in v_e.
std::vector<std::pair<double, ScenarioResult>> erosion_rate_sweep(
    const std::vector<RunConfig>& cfgs);

// Interior stationary point of u_y along the mid-height row, scanned from the
// free end past the moment band; -1 when none exists.
double measure_moat_distance(const Model& model, const SimulationState& st,
                             double L, double h, double skip_from_end);

constexpr double kCrackDamageThreshold = 0.35;

}  // namespace gpd
