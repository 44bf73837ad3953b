#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "core/geometry.hpp"
#include "core/loads.hpp"
#include "core/material.hpp"
#include "core/vec2.hpp"

namespace gpd {

struct LoadSet {
  GravityLoad gravity;
  FoundationSupport support;
  BuoyancyLoad buoyancy;
  MomentLoad moment;
};

struct IntegratorConfig {
  double dt_safety = 0.7;
  double relax_tol = 1.0;        // N/m^3, max-norm of residual force density
  int relax_max_iters = 200000;
  int settle_steps = 200;        // explicit steps with no new breaks
  int max_settle_total = 400000; // hard cap on one settling phase
  double adr_mass_factor = 1.0;  // scales the Gershgorin fictitious mass
};

struct SimulationState {
  std::vector<Vec2> u, v, acc;
  std::vector<double> s_hist;      // per-bond running max stretch
  std::vector<std::uint8_t> broken;
  std::vector<double> mu_eff;      // refreshed by every force evaluation
  double time = 0.0;
  int stage = 0;
  double eroded_length = 0.0;
  std::int64_t break_count = 0;
};

struct ForceStats {
  double residual_max = 0.0;   // over non-fixed points
  std::int64_t new_breaks = 0;
};

struct RelaxResult {
  int iterations = 0;
  double residual = 0.0;
  std::int64_t new_breaks = 0;
  bool stopped_on_break = false;
};

// Binds discretization, bond law and loads; owns no evolving state.
class Model {
 public:
  Model(MaterialPointSet points, BondList bonds, IceMaterial material,
        double delta, ElasticMode mode, LoadSet loads);

  SimulationState make_state() const;

  // Internal + body force density at load time t; updates bond history and
  // mu_eff in st. Deterministic for any worker count.
  ForceStats compute_forces(SimulationState& st, double t,
                            std::vector<Vec2>& density) const;

  // One velocity-Verlet step; st.acc must match st.u (make_state and every
  // step maintain this).
  void step_explicit(SimulationState& st, double dt);

  // Adaptive dynamic relaxation with loads frozen at t_load. Throws
  // NonConvergenceError at the iteration cap.
  RelaxResult relax_to_equilibrium(SimulationState& st, double t_load,
                                   const IntegratorConfig& cfg,
                                   bool stop_on_break = false) const;

  double stable_timestep(double safety) const;

  double kinetic_energy(const SimulationState& st) const;
  double strain_energy(const SimulationState& st) const;
  // Work done by body forces during the last explicit step.
  double last_step_external_work() const { return last_ext_work_; }

  std::vector<double> damage_field(const SimulationState& st) const;

  const MaterialPointSet& points() const { return points_; }
  const BondList& bonds() const { return bonds_; }
  const IceMaterial& material() const { return material_; }
  const LoadSet& loads() const { return loads_; }
  LoadSet& loads() { return loads_; }
  double micromodulus_value() const { return c_; }
  double critical_stretch_value() const { return s0_; }
  double horizon() const { return delta_; }

 private:
  void body_force(const SimulationState& st, double t, int i, Vec2& out) const;

  MaterialPointSet points_;
  BondList bonds_;
  IceMaterial material_;
  LoadSet loads_;
  double delta_;
  double c_;
  double s0_;
  ElasticMode mode_;
  // scratch buffers sized once; mutable so force evaluation stays const
  mutable std::vector<Vec2> bond_force_;
  mutable std::vector<Vec2> ext_density_;
  mutable std::vector<Vec2> density_scratch_;
  mutable double last_ext_work_ = 0.0;
  // band volumes for the moment couple
  double band_top_volume_ = 0.0;
  double band_bottom_volume_ = 0.0;
  double band_lever_ = 0.0;
};

double stable_timestep(const MaterialPointSet& points, const BondList& bonds,
                       double c, double rho_i, double safety);

struct ErosionSchedule {
  double dt_stage = 0.0;          // erosion-clock seconds per stage
  int max_stages = 0;
  double max_eroded_length = 0.0; // 0 => run until front reaches 0
  bool stop_after_first_break = false;
  int max_break_alternations = 200;
};

struct StageRecord {
  int stage = 0;
  double time = 0.0;
  double eroded_length = 0.0;
  std::int64_t total_breaks = 0;
  int relax_iterations = 0;
};

using StageCallback =
    std::function<void(const SimulationState&, const StageRecord&)>;

// Quasi-static staging: advance the erosion clock, relax, and if bonds break
// during relaxation run explicit dynamics until breaking quiesces, then
// resume relaxing. Solver errors propagate tagged with the stage index.
std::vector<StageRecord> run_erosion_schedule(Model& model,
                                              SimulationState& st,
                                              const ErosionSchedule& schedule,
                                              const IntegratorConfig& cfg,
                                              const StageCallback& on_stage);

}  // namespace gpd
