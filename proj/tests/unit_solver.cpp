#include <cmath>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/solver.hpp"
#include "doctest.h"

using namespace gpd;

namespace {

// Two unit-volume points one meter apart with a unit micromodulus: the
// material constants are reverse-engineered so c comes out exactly 1.
Model make_dumbbell() {
  MaterialPointSet ps;
  ps.dx = 1.0;
  ps.thickness = 1.0;
  ps.positions = {{0.0, 0.0}, {1.0, 0.0}};
  ps.volumes = {1.0, 1.0};
  ps.flags = {0, 0};
  const HorizonSpec hor = HorizonSpec::from_dx(1.0, 1.5);
  BondList bonds = build_bonds(ps, hor);
  IceMaterial mat;
  mat.E = 5.0 * M_PI * 1.5 * 1.5 * 1.5 / 48.0;  // plane-strain c == 1
  mat.rho_i = 2.0;
  mat.G0 = 1e9;  // effectively unbreakable
  LoadSet loads;
  loads.gravity.enabled = false;
  return Model(std::move(ps), std::move(bonds), mat, hor.delta,
               ElasticMode::PlaneStrain, loads);
}

Model make_cantilever(double L, double H, double dx, double E, double G0,
                      bool gravity_on = true, bool surface_correction = false) {
  MaterialPointSet ps = discretize_rectangle(L, H, dx, 1.0);
  const HorizonSpec hor = HorizonSpec::from_dx(dx, 3.015);
  append_fixed_layer_left(ps, 0.0, H, fixed_layer_cells(hor));
  tag_no_fail_band_x(ps, -2.0 * hor.delta, 2.0 * hor.delta);
  BondBuildOptions opts;
  opts.surface_correction = surface_correction;
  BondList bonds = build_bonds(ps, hor, opts);
  IceMaterial mat;
  mat.E = E;
  mat.G0 = G0;
  LoadSet loads;
  loads.gravity.enabled = gravity_on;
  return Model(std::move(ps), std::move(bonds), mat, hor.delta,
               ElasticMode::PlaneStrain, loads);
}

}  // namespace

TEST_CASE("stable timestep: two-point bound and scaling laws") {
  MaterialPointSet ps;
  ps.dx = 1.0;
  ps.positions = {{0.0, 0.0}, {1.0, 0.0}};
  ps.volumes = {1.0, 1.0};
  ps.flags = {0, 0};
  BondList bonds;
  bonds.i = {0};
  bonds.j = {1};
  bonds.xi = {{1.0, 0.0}};
  bonds.rest_len = {1.0};
  bonds.volume_factor = {1.0};
  bonds.stiffness_scale = {1.0};
  bonds.no_fail = {0};
  bonds.inc_offset = {0, 1, 2};
  bonds.inc_bond = {0, 0};
  bonds.inc_sign = {1, -1};

  CHECK(stable_timestep(ps, bonds, 1.0, 2.0, 1.0) == doctest::Approx(2.0));
  CHECK(stable_timestep(ps, bonds, 2.0, 2.0, 1.0) ==
        doctest::Approx(2.0 / std::sqrt(2.0)));
  CHECK(stable_timestep(ps, bonds, 1.0, 4.0, 1.0) ==
        doctest::Approx(2.0 * std::sqrt(2.0)));

  BondList none;
  none.inc_offset = {0, 0, 0};
  CHECK_THROWS_AS(stable_timestep(ps, none, 1.0, 2.0, 1.0), ConfigError);
}

TEST_CASE("dumbbell: stretched bond pulls the ends together") {
  Model model = make_dumbbell();
  CHECK(model.micromodulus_value() == doctest::Approx(1.0));
  SimulationState st = model.make_state();
  st.u[1] = {0.01, 0.0};  // s = 0.01
  std::vector<Vec2> density;
  model.compute_forces(st, 0.0, density);
  CHECK(density[0].x == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(density[1].x == doctest::Approx(-0.01).epsilon(1e-9));
  CHECK(density[0].y == doctest::Approx(0.0));
}

TEST_CASE("zero loads, zero state: an explicit step is a no-op") {
  Model model = make_cantilever(2.0, 1.0, 0.25, 1e7, 1e9, false);
  SimulationState st = model.make_state();
  model.step_explicit(st, model.stable_timestep(0.7));
  for (const auto& u : st.u) {
    CHECK(u.x == 0.0);
    CHECK(u.y == 0.0);
  }
}

TEST_CASE("uniform gravity on a free body is rigid free fall") {
  MaterialPointSet ps = discretize_rectangle(2.0, 1.0, 0.25, 1.0);
  const HorizonSpec hor = HorizonSpec::from_dx(0.25, 3.015);
  BondList bonds = build_bonds(ps, hor);
  IceMaterial mat;
  LoadSet loads;  // gravity on by default
  Model model(std::move(ps), std::move(bonds), mat, hor.delta,
              ElasticMode::PlaneStrain, loads);
  SimulationState st = model.make_state();
  const double g = model.loads().gravity.g;
  for (const auto& a : st.acc) {
    CHECK(a.x == 0.0);
    CHECK(a.y == doctest::Approx(-g));
  }
  const double dt = model.stable_timestep(0.7);
  for (int k = 0; k < 50; ++k) model.step_explicit(st, dt);
  // no internal forces ever develop: stretches stay identically zero
  for (std::size_t b = 0; b < model.bonds().size(); ++b)
    CHECK(st.s_hist[b] == 0.0);
  for (const auto& a : st.acc) CHECK(a.y == doctest::Approx(-g));
}

TEST_CASE("relaxation is idempotent on an equilibrated state") {
  Model model = make_cantilever(3.0, 1.0, 0.125, 1e7, 1e9);
  SimulationState st = model.make_state();
  IntegratorConfig cfg;
  cfg.relax_tol = 2.0;
  cfg.relax_max_iters = 100000;
  const RelaxResult first = model.relax_to_equilibrium(st, 0.0, cfg);
  CHECK(first.residual < cfg.relax_tol);
  const RelaxResult again = model.relax_to_equilibrium(st, 0.0, cfg);
  CHECK(again.iterations == 0);
}

TEST_CASE("relaxation reports non-convergence when no equilibrium exists") {
  // free body under gravity: the residual can never fall below rho*g
  MaterialPointSet ps = discretize_rectangle(1.0, 1.0, 0.25, 1.0);
  const HorizonSpec hor = HorizonSpec::from_dx(0.25, 3.015);
  BondList bonds = build_bonds(ps, hor);
  IceMaterial mat;
  LoadSet loads;
  Model model(std::move(ps), std::move(bonds), mat, hor.delta,
              ElasticMode::PlaneStrain, loads);
  SimulationState st = model.make_state();
  IntegratorConfig cfg;
  cfg.relax_tol = 1.0;
  cfg.relax_max_iters = 300;
  CHECK_THROWS_AS(model.relax_to_equilibrium(st, 0.0, cfg),
                  NonConvergenceError);
}

TEST_CASE("fixed points never move") {
  Model model = make_cantilever(3.0, 1.0, 0.125, 1e7, 1e9);
  SimulationState st = model.make_state();
  IntegratorConfig cfg;
  cfg.relax_tol = 2.0;
  cfg.relax_max_iters = 100000;
  model.relax_to_equilibrium(st, 0.0, cfg);
  for (int i = 0; i < model.points().size(); ++i) {
    if (!model.points().has_flag(i, kFixed)) continue;
    CHECK(st.u[i].x == 0.0);
    CHECK(st.u[i].y == 0.0);
  }
}

TEST_CASE("internal forces cancel and momentum is conserved") {
  MaterialPointSet ps = discretize_rectangle(5.0, 2.0, 0.25, 1.0);
  const HorizonSpec hor = HorizonSpec::from_dx(0.25, 3.015);
  BondList bonds = build_bonds(ps, hor);
  IceMaterial mat;
  mat.G0 = 1e9;
  LoadSet loads;
  loads.gravity.enabled = false;
  Model model(std::move(ps), std::move(bonds), mat, hor.delta,
              ElasticMode::PlaneStrain, loads);
  SimulationState st = model.make_state();
  // smooth initial velocity field with a nonzero resultant
  const auto& pts = model.points();
  for (int i = 0; i < pts.size(); ++i) {
    st.v[i] = {1e-3 + 2e-4 * pts.positions[i].y,
               -3e-4 + 1e-4 * std::sin(pts.positions[i].x)};
  }
  auto momentum = [&] {
    Vec2 p{};
    for (int i = 0; i < pts.size(); ++i)
      p += st.v[i] * (mat.rho_i * pts.volumes[i]);
    return p;
  };
  const Vec2 p0 = momentum();
  const double dt = model.stable_timestep(0.7);
  std::vector<Vec2> density;
  const double force_scale = model.micromodulus_value() * std::pow(0.25, 3);
  for (int k = 0; k < 200; ++k) {
    model.step_explicit(st, dt);
    model.compute_forces(st, st.time, density);
    Vec2 net{};
    for (int i = 0; i < pts.size(); ++i) net += density[i] * pts.volumes[i];
    CHECK(net.norm() < 1e-8 * force_scale);
  }
  const Vec2 p1 = momentum();
  CHECK((p1 - p0).norm() < 1e-10 * p0.norm());
}

TEST_CASE("energy balance in the elastic regime") {
  Model model = make_cantilever(3.0, 1.0, 0.125, 1e7, 1e9);
  SimulationState st = model.make_state();
  const double dt = model.stable_timestep(0.3);
  const double ke0 = model.kinetic_energy(st);
  const double se0 = model.strain_energy(st);
  double w_ext = 0.0;
  for (int k = 0; k < 2000; ++k) {
    model.step_explicit(st, dt);
    w_ext += model.last_step_external_work();
  }
  const double dke = model.kinetic_energy(st) - ke0;
  const double dse = model.strain_energy(st) - se0;
  const double scale = std::max(std::abs(w_ext), model.strain_energy(st));
  REQUIRE(scale > 0.0);
  CHECK(std::abs(dke + dse - w_ext) / scale < 0.02);
}

TEST_CASE("divergence raises an error naming the first bad point") {
  Model model = make_cantilever(2.0, 1.0, 0.25, 1e7, 1e9);
  SimulationState st = model.make_state();
  const double dt = 50.0 * model.stable_timestep(1.0);
  bool threw = false;
  try {
    for (int k = 0; k < 200; ++k) model.step_explicit(st, dt);
  } catch (const DivergenceError& e) {
    threw = true;
    CHECK(e.point_index >= 0);
    CHECK(std::string(e.what()).find("point") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("erosion schedule with v_e = 0 is a single relaxation") {
  MaterialPointSet ps = discretize_rectangle(3.0, 1.0, 0.125, 1.0);
  const HorizonSpec hor = HorizonSpec::from_dx(0.125, 3.015);
  append_fixed_layer_left(ps, 0.0, 1.0, fixed_layer_cells(hor));
  tag_rows(ps, kSupportRow, 0.0, 0.125);
  BondList bonds = build_bonds(ps, hor);
  IceMaterial mat;
  mat.E = 1e7;
  mat.G0 = 1e9;
  LoadSet loads;
  loads.support.enabled = true;
  loads.support.k_s = 1e6;
  loads.support.v_e = 0.0;
  loads.support.L = 3.0;
  Model model(std::move(ps), std::move(bonds), mat, hor.delta,
              ElasticMode::PlaneStrain, loads);
  SimulationState st = model.make_state();
  IntegratorConfig cfg;
  cfg.relax_tol = 2.0;
  cfg.relax_max_iters = 200000;
  ErosionSchedule sched;
  sched.dt_stage = 100.0;
  sched.max_stages = 50;
  auto records = run_erosion_schedule(model, st, sched, cfg, {});
  REQUIRE(records.size() == 1);
  CHECK(records[0].eroded_length == 0.0);
}

TEST_CASE("erosion schedule: eroded length grows monotonically") {
  MaterialPointSet ps = discretize_rectangle(3.0, 0.5, 0.125, 1.0);
  const HorizonSpec hor = HorizonSpec::from_dx(0.125, 3.015);
  append_fixed_layer_left(ps, 0.0, 0.5, fixed_layer_cells(hor));
  tag_rows(ps, kSupportRow, 0.0, 0.125);
  tag_no_fail_band_x(ps, -2.0 * hor.delta, 2.0 * hor.delta);
  BondList bonds = build_bonds(ps, hor);
  IceMaterial mat;
  mat.E = 1e7;
  mat.G0 = 1e9;
  LoadSet loads;
  loads.support.enabled = true;
  loads.support.k_s = 1e7;
  loads.support.v_e = 0.125;  // one column per unit stage time
  loads.support.L = 3.0;
  Model model(std::move(ps), std::move(bonds), mat, hor.delta,
              ElasticMode::PlaneStrain, loads);
  SimulationState st = model.make_state();
  IntegratorConfig cfg;
  cfg.relax_tol = 5.0;
  cfg.relax_max_iters = 200000;
  ErosionSchedule sched;
  sched.dt_stage = 1.0;
  sched.max_stages = 6;
  std::vector<double> eroded;
  run_erosion_schedule(model, st, sched, cfg,
                       [&](const SimulationState&, const StageRecord& r) {
                         eroded.push_back(r.eroded_length);
                       });
  REQUIRE(eroded.size() == 6);
  for (std::size_t k = 1; k < eroded.size(); ++k)
    CHECK(eroded[k] >= eroded[k - 1]);
  CHECK(eroded.back() == doctest::Approx(0.625));
}

TEST_CASE("parallel determinism: identical forces for any worker count") {
  Model model = make_cantilever(3.0, 1.0, 0.125, 1e7, 1e9);
  SimulationState st = model.make_state();
  IntegratorConfig cfg;
  cfg.relax_tol = 5.0;
  cfg.relax_max_iters = 50000;

  set_thread_count(1);
  SimulationState s1 = model.make_state();
  model.relax_to_equilibrium(s1, 0.0, cfg);

  set_thread_count(3);
  SimulationState s3 = model.make_state();
  model.relax_to_equilibrium(s3, 0.0, cfg);
  set_thread_count(0);

  REQUIRE(s1.u.size() == s3.u.size());
  for (std::size_t i = 0; i < s1.u.size(); ++i) {
    CHECK(s1.u[i].x == s3.u[i].x);
    CHECK(s1.u[i].y == s3.u[i].y);
  }
}
