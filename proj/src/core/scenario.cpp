#include "core/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "core/errors.hpp"

namespace gpd {

namespace {

// Rightmost x with material in the bottom row (base support extent).
double base_end(const MaterialPointSet& ps) {
  double mx = 0.0;
  for (int i = 0; i < ps.size(); ++i) {
    if (ps.has_flag(i, kFixed)) continue;
    if (ps.positions[i].y < ps.dx)
      mx = std::max(mx, ps.positions[i].x + 0.5 * ps.dx);
  }
  return mx;
}

}  // namespace

BuiltScenario build_front_collapse(const RunConfig& cfg, double R_over_t) {
  const auto& g = cfg.geometry;
  const double R = R_over_t * g.t;
  const double h = g.t + R;
  const HorizonSpec horizon = HorizonSpec::from_dx(g.dx, g.m_ratio);

  MaterialPointSet ps =
      discretize_scenario1(g.a, g.b, g.t, R, g.dx, g.thickness);
  const double x_base = base_end(ps);

  const int layer = fixed_layer_cells(horizon);
  append_fixed_layer_left(ps, 0.0, h, layer);
  if (cfg.mode == RunMode::StaticSweep) {
    // §-style fully constrained base: left face and bottom surface fixed.
    append_fixed_layer_bottom(ps, 0.0, x_base, layer);
    tag_no_fail_band_y(ps, 0.0, 2.0 * horizon.delta);
  } else {
    tag_rows(ps, kSupportRow, 0.0, ps.dx);
  }
  tag_no_fail_band_x(ps, -2.0 * horizon.delta, 2.0 * horizon.delta);

  LoadSet loads;
  loads.gravity.enabled = cfg.gravity.enabled;
  loads.gravity.g = cfg.gravity.g;
  if (cfg.mode == RunMode::Erosion) {
    loads.support.enabled = cfg.support.enabled;
    loads.support.k_s = cfg.support.k_s;
    loads.support.v_e = cfg.support.v_e_si();
    loads.support.L = x_base;
  }

  BondBuildOptions bopts;
  bopts.surface_correction = g.surface_correction;
  BondList bonds = build_bonds(ps, horizon, bopts);

  BuiltScenario out;
  out.domain_height = h;
  out.base_end_x = x_base;
  out.model = std::make_unique<Model>(std::move(ps), std::move(bonds),
                                      cfg.material, horizon.delta,
                                      ElasticMode::PlaneStrain, loads);
  const auto& pts = out.model->points();
  for (int i = 0; i < pts.size(); ++i) {
    if (pts.has_flag(i, kFixed)) continue;
    const Vec2 p = pts.positions[i];
    if (p.y > h - pts.dx && p.x > 2.0 * horizon.delta)
      out.top_surface.push_back(i);
    if (p.x > g.a - pts.dx) out.free_end.push_back(i);
  }
  return out;
}

BuiltScenario build_foot_loosening(const RunConfig& cfg) {
  const auto& g = cfg.geometry;
  const HorizonSpec horizon = HorizonSpec::from_dx(g.dx, g.m_ratio);

  MaterialPointSet ps = discretize_rectangle(g.L, g.h, g.dx, g.thickness);
  const int layer = fixed_layer_cells(horizon);
  append_fixed_layer_left(ps, 0.0, g.h, layer);
  tag_rows(ps, kSupportRow, 0.0, ps.dx);
  tag_rows(ps, kBaseRow, 0.0, ps.dx);
  tag_no_fail_band_x(ps, -2.0 * horizon.delta, 2.0 * horizon.delta);

  const double band_w =
      cfg.moment.band_width > 0.0 ? cfg.moment.band_width : horizon.delta;
  if (cfg.moment.enabled) {
    for (int i = 0; i < ps.size(); ++i) {
      if (ps.has_flag(i, kFixed)) continue;
      const Vec2 p = ps.positions[i];
      if (p.x < g.L - band_w) continue;
      ps.add_flag(i, p.y >= 0.5 * g.h ? kMomentTop : kMomentBottom);
      ps.add_flag(i, kNoFail);
    }
  }

  LoadSet loads;
  // Scenario 2 carries the net buoyancy of Eq. q_b = (rho_w - rho_i) g h;
  // self-weight is already netted out, so gravity stays off.
  loads.gravity.enabled = false;
  loads.gravity.g = cfg.gravity.g;
  loads.support.enabled = cfg.support.enabled;
  loads.support.k_s = cfg.support.k_s;
  loads.support.v_e = cfg.support.v_e_si();
  loads.support.L = g.L;
  loads.buoyancy.enabled = cfg.buoyancy.enabled;
  loads.buoyancy.rho_w = cfg.buoyancy.rho_w;
  loads.buoyancy.h = cfg.buoyancy_h();
  loads.moment.enabled = cfg.moment.enabled;
  loads.moment.M0 = cfg.moment.M0;
  loads.moment.f = cfg.moment.f;
  loads.moment.band_width = band_w;
  loads.moment.mode = cfg.moment.mode;

  BondBuildOptions bopts;
  bopts.surface_correction = g.surface_correction;
  BondList bonds = build_bonds(ps, horizon, bopts);

  BuiltScenario out;
  out.domain_height = g.h;
  out.base_end_x = g.L;
  out.model = std::make_unique<Model>(std::move(ps), std::move(bonds),
                                      cfg.material, horizon.delta,
                                      ElasticMode::PlaneStrain, loads);
  const auto& pts = out.model->points();
  for (int i = 0; i < pts.size(); ++i) {
    if (pts.has_flag(i, kFixed)) continue;
    const Vec2 p = pts.positions[i];
    if (p.y > g.h - pts.dx && p.x > 2.0 * horizon.delta)
      out.top_surface.push_back(i);
    if (p.x > g.L - pts.dx) out.free_end.push_back(i);
  }
  return out;
}

double crack_length(const std::vector<double>& damage,
                    const MaterialPointSet& points, double threshold) {
  if (threshold <= 0.0 || threshold >= 1.0)
    throw QueryError("crack_length: threshold must be in (0,1)");
  const double dx = points.dx;
  std::unordered_map<std::int64_t, int> grid;
  std::vector<int> qual;
  auto key = [](int ix, int iy) {
    return (static_cast<std::int64_t>(ix) << 32) ^
           (static_cast<std::int64_t>(iy) & 0xffffffffll);
  };
  for (int i = 0; i < points.size(); ++i) {
    if (points.has_flag(i, kFixed)) continue;
    if (damage[i] < threshold) continue;
    const int ix = static_cast<int>(std::lround(points.positions[i].x / dx - 0.5));
    const int iy = static_cast<int>(std::lround(points.positions[i].y / dx - 0.5));
    grid[key(ix, iy)] = i;
    qual.push_back(i);
  }
  if (qual.empty()) return 0.0;

  auto cell_of = [&](int i, int& ix, int& iy) {
    ix = static_cast<int>(std::lround(points.positions[i].x / dx - 0.5));
    iy = static_cast<int>(std::lround(points.positions[i].y / dx - 0.5));
  };
  auto neighbors = [&](int i, std::vector<int>& out) {
    out.clear();
    int ix, iy;
    cell_of(i, ix, iy);
    for (int ox = -1; ox <= 1; ++ox) {
      for (int oy = -1; oy <= 1; ++oy) {
        if (ox == 0 && oy == 0) continue;
        auto it = grid.find(key(ix + ox, iy + oy));
        if (it != grid.end()) out.push_back(it->second);
      }
    }
  };

  // Geodesic farthest-point double sweep per component (exact on chains).
  std::unordered_map<int, double> dist;
  auto dijkstra = [&](int src, int& far_node) {
    dist.clear();
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    double far_d = 0.0;
    far_node = src;
    std::vector<int> nb;
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      if (d > far_d || (d == far_d && u < far_node)) {
        far_d = d;
        far_node = u;
      }
      neighbors(u, nb);
      for (int v : nb) {
        const double w =
            (points.positions[v] - points.positions[u]).norm();
        auto it = dist.find(v);
        if (it == dist.end() || it->second > d + w) {
          dist[v] = d + w;
          pq.push({d + w, v});
        }
      }
    }
    return far_d;
  };

  std::unordered_map<int, bool> visited;
  double best = 0.0;
  for (int i : qual) {
    if (visited[i]) continue;
    int a = 0, b = 0;
    dijkstra(i, a);
    const double d = dijkstra(a, b);
    best = std::max(best, d);
    for (const auto& [node, dd] : dist) visited[node] = true;
  }
  return best;
}

std::vector<std::array<double, 2>> crack_growth_rate(const CrackMetrics& m) {
  if (m.series.size() < 3)
    throw QueryError("crack_growth_rate: need at least 3 samples");
  std::vector<std::array<double, 2>> out;
  for (std::size_t k = 1; k + 1 < m.series.size(); ++k) {
    const auto& lo = m.series[k - 1];
    const auto& hi = m.series[k + 1];
    const double dt = hi[0] - lo[0];
    if (dt <= 0.0) throw QueryError("crack_growth_rate: series not sorted");
    out.push_back({m.series[k][1], (hi[2] - lo[2]) / dt});
  }
  return out;
}

namespace {

struct ErosionRunOutput {
  ScenarioResult result;
};

void record_stage(const RunConfig& cfg, const BuiltScenario& built,
                  const SimulationState& st, const StageRecord& rec,
                  bool probe_now, ScenarioResult& result,
                  std::int64_t& breaks_at_initiation,
                  const SnapshotSink& sink, bool snapshot_now) {
  Model& model = *built.model;
  const std::vector<double> phi = model.damage_field(st);
  const double clen = crack_length(phi, model.points(), kCrackDamageThreshold);

  ProbeSample sample;
  sample.stage = rec.stage;
  sample.time = rec.time;
  sample.eroded_length = rec.eroded_length;
  sample.crack_length = clen;
  sample.total_breaks = rec.total_breaks;

  CrackMetrics& m = result.metrics;
  m.series.push_back({rec.time, rec.eroded_length, clen});

  std::optional<VirialStressField> field;
  if (probe_now || (rec.total_breaks > 0 && m.initiation_time < 0.0)) {
    field = stress_field(model, st);
  }
  if (field && !built.top_surface.empty()) {
    const TensileProbe probe =
        max_tensile_probe(*field, model.points(), built.top_surface);
    sample.sigma_max = probe.sigma11;
    sample.sigma_location = probe.location;
    if (rec.total_breaks == 0) {
      result.last_pre_fracture_sigma_max = probe.sigma11;
      result.last_pre_fracture_sigma_location = probe.location;
    }
  }
  if (rec.total_breaks > 0 && m.initiation_time < 0.0) {
    m.initiation_time = rec.time;
    m.initiation_eroded_length = rec.eroded_length;
    // site: the most damaged point
    int best = -1;
    double bphi = -1.0;
    int damaged = 0;
    for (int i = 0; i < model.points().size(); ++i) {
      if (phi[i] > bphi) {
        bphi = phi[i];
        best = i;
      }
      if (phi[i] > 0.0 && phi[i] < kCrackDamageThreshold) ++damaged;
    }
    m.initiation_site = model.points().positions[best];
    m.pre_initiation_damage_count = damaged;
    breaks_at_initiation = rec.total_breaks;
  }
  result.probes.push_back(sample);

  if (sink && snapshot_now) {
    if (!field) field = stress_field(model, st);
    sink(model, st, *field, rec.stage);
  }
}

}  // namespace

ScenarioResult run_front_collapse(const RunConfig& cfg,
                                  const SnapshotSink& sink) {
  ScenarioResult result;
  if (cfg.mode == RunMode::StaticSweep) {
    for (double r : cfg.r_over_t_values) {
      BuiltScenario built = build_front_collapse(cfg, r);
      Model& model = *built.model;
      SimulationState st = model.make_state();
      const RelaxResult relax =
          model.relax_to_equilibrium(st, 0.0, cfg.integrator);
      const VirialStressField field = stress_field(model, st);

      SweepMemberResult member;
      member.R_over_t = r;
      member.relax_iterations = relax.iterations;
      const TensileProbe probe =
          max_tensile_probe(field, model.points(), built.top_surface);
      member.sigma_max = probe.sigma11;
      member.sigma_location = probe.location;
      for (int i : built.free_end) {
        const double mag = st.u[i].norm();
        if (mag > member.tip_displacement) {
          member.tip_displacement = mag;
          member.tip_location = model.points().positions[i];
        }
      }
      result.sweep.push_back(member);
      if (sink) sink(model, st, field, static_cast<int>(result.sweep.size()));
    }
    return result;
  }

  BuiltScenario built = build_front_collapse(cfg, cfg.geometry.R_over_t);
  Model& model = *built.model;
  SimulationState st = model.make_state();

  ErosionSchedule schedule;
  schedule.dt_stage = cfg.support.stage_dt > 0.0
                          ? cfg.support.stage_dt
                          : cfg.geometry.dx / model.loads().support.v_e;
  schedule.max_stages = cfg.support.max_stages;
  schedule.max_eroded_length = cfg.support.max_eroded_length;
  schedule.stop_after_first_break = cfg.support.stop_on_fracture;

  std::int64_t breaks_at_init = 0;
  run_erosion_schedule(
      model, st, schedule, cfg.integrator,
      [&](const SimulationState& s, const StageRecord& rec) {
        const bool probe_now = (rec.stage % cfg.output.probe_every) == 0;
        const bool snap_now = (rec.stage % cfg.output.snapshot_every) == 0;
        record_stage(cfg, built, s, rec, probe_now, result, breaks_at_init,
                     sink, snap_now);
      });
  result.metrics.growth_rate = result.metrics.series.size() >= 3
                                   ? crack_growth_rate(result.metrics)
                                   : std::vector<std::array<double, 2>>{};
  return result;
}

ScenarioResult run_foot_loosening(const RunConfig& cfg,
                                  const SnapshotSink& sink) {
  ScenarioResult result;
  BuiltScenario built = build_foot_loosening(cfg);
  Model& model = *built.model;
  SimulationState st = model.make_state();

  ErosionSchedule schedule;
  const double v_e = model.loads().support.v_e;
  schedule.dt_stage = cfg.support.stage_dt > 0.0
                          ? cfg.support.stage_dt
                          : (v_e > 0.0 ? cfg.geometry.dx / v_e : 0.0);
  schedule.max_stages = cfg.support.max_stages;
  schedule.max_eroded_length = cfg.support.max_eroded_length;
  schedule.stop_after_first_break = cfg.support.stop_on_fracture;

  std::int64_t breaks_at_init = 0;
  run_erosion_schedule(
      model, st, schedule, cfg.integrator,
      [&](const SimulationState& s, const StageRecord& rec) {
        const bool probe_now = (rec.stage % cfg.output.probe_every) == 0;
        const bool snap_now = (rec.stage % cfg.output.snapshot_every) == 0;
        record_stage(cfg, built, s, rec, probe_now, result, breaks_at_init,
                     sink, snap_now);
      });

  result.x_rm = measure_moat_distance(
      model, st, cfg.geometry.L, cfg.geometry.h,
      model.loads().moment.band_width + model.horizon());
  result.metrics.growth_rate = result.metrics.series.size() >= 3
                                   ? crack_growth_rate(result.metrics)
                                   : std::vector<std::array<double, 2>>{};
  return result;
}

std::vector<std::pair<double, ScenarioResult>> erosion_rate_sweep(
    const std::vector<RunConfig>& cfgs) {
  std::vector<std::pair<double, ScenarioResult>> out;
  for (const auto& cfg : cfgs) {
    out.emplace_back(cfg.support.v_e, run_foot_loosening(cfg));
  }
  return out;
}

double measure_moat_distance(const Model& model, const SimulationState& st,
                             double L, double h, double skip_from_end) {
  const auto& pts = model.points();
  const double dx = pts.dx;
  // mid-height row
  const int ny = static_cast<int>(std::lround(h / dx));
  const double y_row = (ny / 2 + 0.5) * dx;
  std::vector<std::pair<double, double>> row;  // (x, u_y)
  for (int i = 0; i < pts.size(); ++i) {
    if (pts.has_flag(i, kFixed)) continue;
    if (std::abs(pts.positions[i].y - y_row) < 0.25 * dx)
      row.emplace_back(pts.positions[i].x, st.u[i].y);
  }
  std::sort(row.begin(), row.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  // first interior extremum scanning inward from the free end
  for (std::size_t k = 1; k + 1 < row.size(); ++k) {
    if (L - row[k].first < skip_from_end) continue;
    const double dl = row[k].second - row[k - 1].second;
    const double dr = row[k + 1].second - row[k].second;
    if (dl == 0.0 && dr == 0.0) continue;
    if (dl * dr <= 0.0) {
      // parabola through the triple for sub-grid placement
      const double y0 = row[k - 1].second, y1 = row[k].second,
                   y2 = row[k + 1].second;
      const double denom = y0 - 2.0 * y1 + y2;
      double shift = 0.0;
      if (denom != 0.0) shift = 0.5 * (y0 - y2) / denom;
      // row is descending in x: shift is in units of -dx along the scan
      const double x_ext = row[k].first - shift * (row[k - 1].first - row[k].first);
      return L - x_ext;
    }
  }
  return -1.0;
}

}  // namespace gpd
