#include "core/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/beam_oracle.hpp"
#include "core/errors.hpp"
#include "core/snapshot.hpp"

namespace gpd {

namespace {

std::string num(double v) {
  char buf[32];
  if (v == 0.0) v = 0.0;
  std::snprintf(buf, sizeof(buf), "%.8e", v);
  return buf;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw IoError("short write: " + path);
}

}  // namespace

RunResult run_scenario(const RunConfig& cfg,
                       const std::string& out_dir_override) {
  RunResult out;
  out.cfg = cfg;
  out.out_dir = out_dir_override.empty() ? cfg.output.dir : out_dir_override;
  std::error_code ec;
  std::filesystem::create_directories(out.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out.out_dir + ": " +
                        ec.message());

  const std::string digest = cfg.digest_hex();
  int snap_counter = 0;
  SnapshotSink sink = [&](const Model& model, const SimulationState& st,
                          const VirialStressField& field, int /*stage*/) {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%04d.csv", snap_counter++);
    const std::string path = out.out_dir + "/" + name;
    write_snapshot(path, model, st, field, digest);
    out.snapshot_paths.push_back(path);
  };

  out.scenario = cfg.scenario == ScenarioKind::FrontCollapse
                     ? run_front_collapse(cfg, sink)
                     : run_foot_loosening(cfg, sink);

  // crack-metrics time series
  if (!out.scenario.metrics.series.empty()) {
    std::string body = "time,erosion_length,crack_length\n";
    for (const auto& row : out.scenario.metrics.series)
      body += num(row[0]) + "," + num(row[1]) + "," + num(row[2]) + "\n";
    out.metrics_path = out.out_dir + "/metrics.csv";
    write_text(out.metrics_path, body);
  }
  if (!out.scenario.metrics.growth_rate.empty()) {
    std::string body = "erosion_length,growth_rate\n";
    for (const auto& row : out.scenario.metrics.growth_rate)
      body += num(row[0]) + "," + num(row[1]) + "\n";
    out.rates_path = out.out_dir + "/growth_rate.csv";
    write_text(out.rates_path, body);
  }

  // summary
  std::string body;
  if (cfg.mode == RunMode::StaticSweep &&
      cfg.scenario == ScenarioKind::FrontCollapse) {
    body = "R_over_t,sigma_max,sigma_x,sigma_y,tip_displacement\n";
    for (const auto& m : out.scenario.sweep) {
      body += num(m.R_over_t) + "," + num(m.sigma_max) + "," +
              num(m.sigma_location.x) + "," + num(m.sigma_location.y) + "," +
              num(m.tip_displacement) + "\n";
    }
  } else {
    body =
        "v_e_m_per_day,sigma_max_pre_fracture,initiation_time,"
        "final_crack_length,x_rm\n";
    const auto& mR = out.scenario.metrics;
    const double final_len = mR.series.empty() ? 0.0 : mR.series.back()[2];
    body += num(cfg.support.v_e) + "," +
            num(out.scenario.last_pre_fracture_sigma_max) + "," +
            num(mR.initiation_time) + "," + num(final_len) + "," +
            num(out.scenario.x_rm) + "\n";
  }
  out.summary_path = out.out_dir + "/summary.csv";
  write_text(out.summary_path, body);

  // the full config alongside the outputs, audit included
  std::string cfg_body = cfg.serialize();
  if (!cfg.defaulted.empty()) {
    cfg_body += "\n# defaults filled on parse:\n";
    for (const auto& d : cfg.defaulted) cfg_body += "# " + d + "\n";
  }
  write_text(out.out_dir + "/config.resolved.ini", cfg_body);
  return out;
}

SweepResult run_sweep(const RunConfig& base, const std::string& key,
                      const std::vector<std::string>& values,
                      const std::string& out_dir_override) {
  if (values.empty()) throw ConfigError("sweep: no values given");
  SweepResult sweep;
  const std::string root =
      out_dir_override.empty() ? base.output.dir : out_dir_override;
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw IoError("cannot create output directory " + root);

  std::string summary = key + ",sigma_max,initiation_time,final_crack_length\n";
  for (const auto& v : values) {
    RunConfig cfg = base;
    cfg.set(key, v);
    cfg.validate();
    const std::string dir = root + "/run_" + key + "_" + v;
    sweep.members.push_back(run_scenario(cfg, dir));
    const auto& res = sweep.members.back().scenario;
    double sigma_max = res.last_pre_fracture_sigma_max;
    for (const auto& m : res.sweep) sigma_max = std::max(sigma_max, m.sigma_max);
    const double final_len =
        res.metrics.series.empty() ? 0.0 : res.metrics.series.back()[2];
    summary += v + "," + num(sigma_max) + "," + num(res.metrics.initiation_time) +
               "," + num(final_len) + "\n";
  }
  sweep.summary_path = root + "/summary.csv";
  write_text(sweep.summary_path, summary);
  return sweep;
}

CalibrationReport calibrate(const RunConfig& cfg) {
  CalibrationReport rep;
  rep.delta = cfg.delta();
  rep.c = micromodulus(cfg.material.E, rep.delta, ElasticMode::PlaneStrain,
                       cfg.geometry.thickness);
  rep.s0_from_G0 = critical_stretch_from_G0(cfg.material.G0, cfg.material.E,
                                            rep.delta);
  rep.s0_from_KI = critical_stretch_from_KI(cfg.material.K_I, cfg.material.E,
                                            rep.delta);
  rep.G0_implied_by_KI = cfg.material.implied_G0_from_KI();
  rep.table_inconsistent =
      std::abs(rep.G0_implied_by_KI - cfg.material.G0) > 0.01 * cfg.material.G0;
  rep.s0_used = critical_stretch(cfg.material, rep.delta);

  // interior-lattice timestep bound from a small probe patch
  {
    const double dx = cfg.geometry.dx;
    const double side =
        std::max(4.0 * rep.delta, 8.0 * dx) + 2.0 * dx;
    MaterialPointSet probe =
        discretize_rectangle(side, side, dx, cfg.geometry.thickness);
    BondList bonds =
        build_bonds(probe, HorizonSpec::from_dx(dx, cfg.geometry.m_ratio));
    rep.stable_dt = stable_timestep(probe, bonds, rep.c, cfg.material.rho_i,
                                    cfg.integrator.dt_safety);
  }

  const double h_beam = cfg.scenario == ScenarioKind::FootLoose
                            ? cfg.geometry.h
                            : cfg.geometry.t;
  const double L_beam = cfg.scenario == ScenarioKind::FootLoose
                            ? cfg.geometry.L
                            : cfg.geometry.a;
  const BeamOracle oracle = BeamOracle::plane_strain(
      cfg.material.E, h_beam, cfg.buoyancy.rho_w * cfg.gravity.g);
  rep.beta = std::pow(oracle.k / (4.0 * oracle.B), 0.25);
  try {
    rep.x_rm = floating_beam_xrm(oracle, cfg.moment.M0, L_beam).x_rm;
  } catch (const ConfigError&) {
    rep.x_rm = -1.0;  // beam too short for the semi-infinite oracle
  }
  return rep;
}

std::string format_calibration(const CalibrationReport& rep) {
  std::string out;
  out += "delta                = " + num(rep.delta) + " m\n";
  out += "micromodulus c       = " + num(rep.c) + " N/m^6 (plane strain)\n";
  out += "s0 (from G0)         = " + num(rep.s0_from_G0) + "\n";
  out += "s0 (from K_I)        = " + num(rep.s0_from_KI) + "\n";
  out += "s0 in use            = " + num(rep.s0_used) + "\n";
  out += "G0 implied by K_I    = " + num(rep.G0_implied_by_KI) + " J/m^2\n";
  if (rep.table_inconsistent) {
    out +=
        "WARNING: material table inconsistent: G0 and K_I^2/E disagree; "
        "s0_source selects which governs\n";
  }
  out += "stable dt            = " + num(rep.stable_dt) + " s\n";
  out += "beta                 = " + num(rep.beta) + " 1/m\n";
  out += rep.x_rm >= 0.0
             ? "oracle x_RM          = " + num(rep.x_rm) + " m\n"
             : "oracle x_RM          = n/a (beam below semi-infinite regime)\n";
  return out;
}

}  // namespace gpd
