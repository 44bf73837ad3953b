#include "core/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace gpd {

namespace {
constexpr std::size_t kBondGrain = 8192;
constexpr std::size_t kPointGrain = 4096;
}  // namespace

Model::Model(MaterialPointSet points, BondList bonds, IceMaterial material,
             double delta, ElasticMode mode, LoadSet loads)
    : points_(std::move(points)),
      bonds_(std::move(bonds)),
      material_(material),
      loads_(loads),
      delta_(delta),
      mode_(mode) {
  material_.validate();
  c_ = micromodulus(material_.E, delta_, mode_, points_.thickness);
  s0_ = critical_stretch(material_, delta_);
  bond_force_.resize(bonds_.size());
  ext_density_.resize(points_.size());
  density_scratch_.resize(points_.size());
  if (loads_.moment.enabled) {
    for (int i = 0; i < points_.size(); ++i) {
      if (points_.has_flag(i, kMomentTop)) band_top_volume_ += points_.volumes[i];
      if (points_.has_flag(i, kMomentBottom))
        band_bottom_volume_ += points_.volumes[i];
    }
    band_lever_ = band_lever_arm(points_);
  }
}

SimulationState Model::make_state() const {
  SimulationState st;
  const int n = points_.size();
  st.u.assign(n, Vec2{});
  st.v.assign(n, Vec2{});
  st.acc.assign(n, Vec2{});
  st.s_hist.assign(bonds_.size(), 0.0);
  st.broken.assign(bonds_.size(), 0);
  st.mu_eff.assign(bonds_.size(), 1.0);
  std::vector<Vec2> density(n);
  compute_forces(st, st.time, density);
  const double inv_rho = 1.0 / material_.rho_i;
  for (int i = 0; i < n; ++i) st.acc[i] = density[i] * inv_rho;
  return st;
}

void Model::body_force(const SimulationState& st, double t, int i,
                       Vec2& out) const {
  if (points_.has_flag(i, kFixed)) return;
  if (loads_.gravity.enabled) {
    out.y -= material_.rho_i * loads_.gravity.g;
  }
  const double dx = points_.dx;
  if (loads_.support.enabled && points_.has_flag(i, kSupportRow)) {
    const double x_front = erosion_front(t, loads_.support.L, loads_.support.v_e);
    // supported fraction of the cell footprint, sub-cell erosion ramp
    const double frac = std::clamp(
        (x_front - (points_.positions[i].x - 0.5 * dx)) / dx, 0.0, 1.0);
    if (frac > 0.0) {
      const Vec2 traction =
          support_reaction(st.u[i].y, true, loads_.support.k_s);
      out += traction * (frac / dx);  // traction spread over the row height
    }
  }
  if (loads_.buoyancy.enabled && points_.has_flag(i, kBaseRow)) {
    const double q_b = buoyancy_line_load(loads_.buoyancy.rho_w, material_.rho_i,
                                          loads_.gravity.g, loads_.buoyancy.h);
    out.y += q_b / dx;
  }
  if (loads_.moment.enabled &&
      (points_.has_flag(i, kMomentTop) || points_.has_flag(i, kMomentBottom))) {
    const double M = moment_value(loads_.moment, t);
    const CoupleDensities cd =
        moment_couple(M, band_lever_, band_top_volume_, band_bottom_volume_);
    out += points_.has_flag(i, kMomentTop) ? cd.top : cd.bottom;
  }
}

ForceStats Model::compute_forces(SimulationState& st, double t,
                                 std::vector<Vec2>& density) const {
  const std::size_t nb = bonds_.size();
  const int n = points_.size();
  density.assign(n, Vec2{});

  // Bond pass: forces and damage state, disjoint writes per bond.
  const std::size_t bond_chunks = chunk_count(nb, kBondGrain);
  std::vector<std::int64_t> chunk_breaks(bond_chunks, 0);
  const double c = c_;
  const double s0 = s0_;
  const double gamma = material_.gamma;
  parallel_for(nb, kBondGrain, [&](std::size_t b0, std::size_t b1) {
    std::int64_t breaks = 0;
    for (std::size_t b = b0; b < b1; ++b) {
      // relative displacement first: rigid translations cancel exactly
      const Vec2 d = bonds_.xi[b] + (st.u[bonds_.j[b]] - st.u[bonds_.i[b]]);
      const double len = d.norm();
      const double L0 = bonds_.rest_len[b];
      const double s = (len - L0) / L0;
      double mu;
      if (bonds_.no_fail[b]) {
        mu = 1.0;
      } else if (st.broken[b]) {
        mu = 0.0;
      } else {
        if (s > st.s_hist[b]) st.s_hist[b] = s;
        if (st.s_hist[b] >= s0) {
          st.broken[b] = 1;
          mu = 0.0;
          ++breaks;
        } else {
          mu = mu_effective(s, st.s_hist[b], s0, gamma, 0.0);
        }
      }
      st.mu_eff[b] = mu;
      const double fmag =
          c * bonds_.stiffness_scale[b] * s * mu * bonds_.volume_factor[b];
      bond_force_[b] = len > 0.0 ? d * (fmag / len) : Vec2{};
    }
    chunk_breaks[b0 / kBondGrain] += breaks;
  });

  // Point pass: reduce in canonical incidence order, add body forces.
  parallel_for(static_cast<std::size_t>(n), kPointGrain,
               [&](std::size_t p0, std::size_t p1) {
                 for (std::size_t p = p0; p < p1; ++p) {
                   Vec2 acc{};
                   const int pi = static_cast<int>(p);
                   for (std::int32_t k = bonds_.inc_offset[pi];
                        k < bonds_.inc_offset[pi + 1]; ++k) {
                     const std::int32_t b = bonds_.inc_bond[k];
                     const int other =
                         bonds_.inc_sign[k] > 0 ? bonds_.j[b] : bonds_.i[b];
                     const double w = points_.volumes[other];
                     if (bonds_.inc_sign[k] > 0) {
                       acc += bond_force_[b] * w;
                     } else {
                       acc -= bond_force_[b] * w;
                     }
                   }
                   Vec2 ext{};
                   body_force(st, t, pi, ext);
                   ext_density_[p] = ext;
                   density[p] = acc + ext;
                 }
               });

  ForceStats stats;
  for (std::size_t cchunk = 0; cchunk < bond_chunks; ++cchunk)
    stats.new_breaks += chunk_breaks[cchunk];
  st.break_count += stats.new_breaks;

  // Residual over free points; chunked max is order-insensitive.
  const std::size_t pt_chunks = chunk_count(n, kPointGrain);
  std::vector<double> chunk_max(pt_chunks, 0.0);
  parallel_for(static_cast<std::size_t>(n), kPointGrain,
               [&](std::size_t p0, std::size_t p1) {
                 double m = 0.0;
                 for (std::size_t p = p0; p < p1; ++p) {
                   if (points_.flags[p] & kFixed) continue;
                   m = std::max(m, density[p].norm());
                 }
                 chunk_max[p0 / kPointGrain] = m;
               });
  for (double m : chunk_max) stats.residual_max = std::max(stats.residual_max, m);
  return stats;
}

void Model::step_explicit(SimulationState& st, double dt) {
  const int n = points_.size();
  const double half = 0.5 * dt;
  const double inv_rho = 1.0 / material_.rho_i;
  parallel_for(static_cast<std::size_t>(n), kPointGrain,
               [&](std::size_t p0, std::size_t p1) {
                 for (std::size_t p = p0; p < p1; ++p) {
                   if (points_.flags[p] & kFixed) {
                     st.u[p] = st.v[p] = st.acc[p] = Vec2{};
                     continue;
                   }
                   st.v[p] += st.acc[p] * half;
                   st.u[p] += st.v[p] * dt;
                 }
               });
  st.time += dt;
  compute_forces(st, st.time, density_scratch_);

  // External work along the step, trapezoid in the midpoint velocities.
  const std::size_t pt_chunks = chunk_count(n, kPointGrain);
  std::vector<double> chunk_work(pt_chunks, 0.0);
  parallel_for(static_cast<std::size_t>(n), kPointGrain,
               [&](std::size_t p0, std::size_t p1) {
                 double w = 0.0;
                 for (std::size_t p = p0; p < p1; ++p) {
                   if (points_.flags[p] & kFixed) continue;
                   st.acc[p] = density_scratch_[p] * inv_rho;
                   w += ext_density_[p].dot(st.v[p]) * points_.volumes[p] * dt;
                   st.v[p] += st.acc[p] * half;
                 }
                 chunk_work[p0 / kPointGrain] = w;
               });
  last_ext_work_ = 0.0;
  for (double w : chunk_work) last_ext_work_ += w;

  for (int p = 0; p < n; ++p) {
    if (!std::isfinite(st.u[p].x) || !std::isfinite(st.u[p].y)) {
      throw DivergenceError(
          "explicit step diverged: non-finite displacement at point " +
              std::to_string(p),
          p);
    }
  }
}

RelaxResult Model::relax_to_equilibrium(SimulationState& st, double t_load,
                                        const IntegratorConfig& cfg,
                                        bool stop_on_break) const {
  const int n = points_.size();
  const std::size_t nb = bonds_.size();

  // Gershgorin-style fictitious diagonal mass, pseudo timestep 1.
  std::vector<double> mass(n, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    const double k = c_ * bonds_.stiffness_scale[b] * bonds_.volume_factor[b] /
                     bonds_.rest_len[b];
    mass[bonds_.i[b]] += k * points_.volumes[bonds_.j[b]];
    mass[bonds_.j[b]] += k * points_.volumes[bonds_.i[b]];
  }
  double mass_floor = 0.0;
  for (int p = 0; p < n; ++p) mass_floor = std::max(mass_floor, mass[p]);
  mass_floor *= 1e-12;
  for (int p = 0; p < n; ++p)
    mass[p] = std::max(mass[p], mass_floor) * cfg.adr_mass_factor;

  std::vector<Vec2> vel(n, Vec2{});
  std::vector<Vec2> force(n), force_prev(n);

  RelaxResult out;
  std::vector<double> history;
  ForceStats stats = compute_forces(st, t_load, force);
  out.new_breaks += stats.new_breaks;
  if (stats.residual_max < cfg.relax_tol) {
    out.residual = stats.residual_max;
    return out;
  }

  const std::size_t pt_chunks = chunk_count(n, kPointGrain);
  std::vector<double> chunk_num(pt_chunks), chunk_den(pt_chunks);

  for (int it = 1; it <= cfg.relax_max_iters; ++it) {
    if (it == 1) {
      for (int p = 0; p < n; ++p) {
        if (points_.flags[p] & kFixed) continue;
        vel[p] = force[p] * (0.5 / mass[p]);
      }
    } else {
      // Damping from the local stiffness estimate (force change per velocity).
      parallel_for(static_cast<std::size_t>(n), kPointGrain,
                   [&](std::size_t p0, std::size_t p1) {
                     double num = 0.0, den = 0.0;
                     for (std::size_t p = p0; p < p1; ++p) {
                       if (points_.flags[p] & kFixed) continue;
                       const double m = mass[p];
                       const double ux = st.u[p].x, uy = st.u[p].y;
                       if (vel[p].x != 0.0) {
                         const double kl =
                             -(force[p].x - force_prev[p].x) / (m * vel[p].x);
                         if (kl > 0.0) num += ux * ux * kl;
                       }
                       if (vel[p].y != 0.0) {
                         const double kl =
                             -(force[p].y - force_prev[p].y) / (m * vel[p].y);
                         if (kl > 0.0) num += uy * uy * kl;
                       }
                       den += ux * ux + uy * uy;
                     }
                     chunk_num[p0 / kPointGrain] = num;
                     chunk_den[p0 / kPointGrain] = den;
                   });
      double num = 0.0, den = 0.0;
      for (std::size_t cc = 0; cc < pt_chunks; ++cc) {
        num += chunk_num[cc];
        den += chunk_den[cc];
      }
      double cn = den > 0.0 ? 2.0 * std::sqrt(std::max(num, 0.0) / den) : 0.0;
      cn = std::min(cn, 1.9);
      const double a = (2.0 - cn) / (2.0 + cn);
      const double bfac = 2.0 / (2.0 + cn);
      parallel_for(static_cast<std::size_t>(n), kPointGrain,
                   [&](std::size_t p0, std::size_t p1) {
                     for (std::size_t p = p0; p < p1; ++p) {
                       if (points_.flags[p] & kFixed) continue;
                       vel[p] = vel[p] * a + force[p] * (bfac / mass[p]);
                     }
                   });
    }
    parallel_for(static_cast<std::size_t>(n), kPointGrain,
                 [&](std::size_t p0, std::size_t p1) {
                   for (std::size_t p = p0; p < p1; ++p) {
                     if (points_.flags[p] & kFixed) continue;
                     st.u[p] += vel[p];
                   }
                 });
    force_prev.swap(force);
    stats = compute_forces(st, t_load, force);
    out.new_breaks += stats.new_breaks;
    out.iterations = it;
    out.residual = stats.residual_max;
    if ((it & 63) == 0) history.push_back(stats.residual_max);

    if (stats.residual_max < cfg.relax_tol) {
      return out;
    }
    if (stop_on_break && out.new_breaks > 0) {
      out.stopped_on_break = true;
      return out;
    }
  }
  history.push_back(out.residual);
  throw NonConvergenceError(
      "relaxation did not converge: residual " + std::to_string(out.residual) +
          " after " + std::to_string(cfg.relax_max_iters) + " iterations",
      std::move(history));
}

double Model::stable_timestep(double safety) const {
  return gpd::stable_timestep(points_, bonds_, c_, material_.rho_i, safety);
}

double stable_timestep(const MaterialPointSet& points, const BondList& bonds,
                       double c, double rho_i, double safety) {
  const int n = points.size();
  std::vector<double> ksum(n, 0.0);
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    const double k = c * bonds.stiffness_scale[b] * bonds.volume_factor[b] /
                     bonds.rest_len[b];
    ksum[bonds.i[b]] += k * points.volumes[bonds.j[b]];
    ksum[bonds.j[b]] += k * points.volumes[bonds.i[b]];
  }
  double dt = std::numeric_limits<double>::infinity();
  for (int p = 0; p < n; ++p) {
    if (ksum[p] <= 0.0) continue;  // isolated points do not constrain dt
    dt = std::min(dt, std::sqrt(2.0 * rho_i / ksum[p]));
  }
  if (!std::isfinite(dt))
    throw ConfigError("stable_timestep: no bonded points in the model");
  return safety * dt;
}

double Model::kinetic_energy(const SimulationState& st) const {
  double ke = 0.0;
  for (int p = 0; p < points_.size(); ++p)
    ke += 0.5 * material_.rho_i * points_.volumes[p] * st.v[p].norm2();
  return ke;
}

double Model::strain_energy(const SimulationState& st) const {
  double se = 0.0;
  for (std::size_t b = 0; b < bonds_.size(); ++b) {
    if (st.broken[b]) continue;
    const Vec2 d = bonds_.xi[b] + (st.u[bonds_.j[b]] - st.u[bonds_.i[b]]);
    const double s = (d.norm() - bonds_.rest_len[b]) / bonds_.rest_len[b];
    se += 0.5 * c_ * bonds_.stiffness_scale[b] * s * s * bonds_.rest_len[b] *
          points_.volumes[bonds_.i[b]] * points_.volumes[bonds_.j[b]] *
          bonds_.volume_factor[b];
  }
  return se;
}

std::vector<double> Model::damage_field(const SimulationState& st) const {
  std::vector<double> phi(points_.size(), 0.0);
  for (int p = 0; p < points_.size(); ++p)
    phi[p] = damage_index(p, bonds_, points_, st.mu_eff.data());
  return phi;
}

std::vector<StageRecord> run_erosion_schedule(Model& model, SimulationState& st,
                                              const ErosionSchedule& schedule,
                                              const IntegratorConfig& cfg,
                                              const StageCallback& on_stage) {
  if (!model.loads().support.enabled)
    throw ConfigError("erosion schedule requires the support load");

  std::vector<StageRecord> records;
  const double v_e = model.loads().support.v_e;
  const double L = model.loads().support.L;
  const int n_stages = (v_e == 0.0) ? 1 : std::max(schedule.max_stages, 1);
  const double dt_explicit = model.stable_timestep(cfg.dt_safety);

  for (int stage = 0; stage < n_stages; ++stage) {
    if (stage > 0) st.time += schedule.dt_stage;
    st.stage = stage;
    st.eroded_length = L - erosion_front(st.time, L, v_e);

    std::int64_t stage_breaks = 0;
    int relax_iters = 0;
    int alternations = 0;
    try {
      for (;;) {
        RelaxResult r =
            model.relax_to_equilibrium(st, st.time, cfg, /*stop_on_break=*/true);
        relax_iters += r.iterations;
        stage_breaks += r.new_breaks;
        if (!r.stopped_on_break && r.new_breaks == 0) break;
        // Fracture is running: let explicit dynamics carry it until no new
        // bonds break for a settle window, then resume relaxing.
        if (++alternations > schedule.max_break_alternations)
          throw SolverError("fracture did not quiesce");
        int quiet = 0;
        int total = 0;
        while (quiet < cfg.settle_steps) {
          const std::int64_t before = st.break_count;
          model.step_explicit(st, dt_explicit);
          st.time -= dt_explicit;  // settle runs on solver time, not erosion clock
          quiet = (st.break_count == before) ? quiet + 1 : 0;
          stage_breaks += st.break_count - before;
          if (++total > cfg.max_settle_total)
            throw SolverError("fracture settling exceeded step cap");
        }
        // Quasi-static resume: drop the transient kinetic state.
        std::fill(st.v.begin(), st.v.end(), Vec2{});
      }
    } catch (NonConvergenceError& e) {
      throw NonConvergenceError(
          "stage " + std::to_string(stage) + ": " + e.what(),
          std::move(e.residual_history));
    } catch (const DivergenceError& e) {
      throw DivergenceError("stage " + std::to_string(stage) + ": " + e.what(),
                            e.point_index);
    } catch (const SolverError& e) {
      throw SolverError("stage " + std::to_string(stage) + ": " + e.what());
    }

    StageRecord rec;
    rec.stage = stage;
    rec.time = st.time;
    rec.eroded_length = st.eroded_length;
    rec.total_breaks = st.break_count;
    rec.relax_iterations = relax_iters;
    records.push_back(rec);
    if (on_stage) on_stage(st, rec);

    if (schedule.stop_after_first_break && st.break_count > 0) break;
    if (schedule.max_eroded_length > 0.0 &&
        st.eroded_length >= schedule.max_eroded_length)
      break;
    if (erosion_front(st.time + schedule.dt_stage, L, v_e) <= 0.0) break;
  }
  return records;
}

}  // namespace gpd
