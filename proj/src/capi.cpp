#include "glacierpd.h"

#include <algorithm>
#include <cstring>
#include <string>
#include <vector>

#include "core/beam_oracle.hpp"
#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/run.hpp"
#include "core/snapshot.hpp"

using namespace gpd;

struct gpd_config {
  RunConfig cfg;
};

struct gpd_run {
  RunResult result;
  SweepResult sweep;
  bool is_sweep = false;
};

namespace {

thread_local std::string t_last_error;

void set_error(const std::string& msg) { t_last_error = msg; }

// Maps the C++ error taxonomy onto status codes; must wrap every entry point.
template <class Fn>
gpd_status guarded(Fn&& fn) {
  try {
    fn();
    return GPD_OK;
  } catch (const SolverError& e) {
    set_error(e.what());
    return GPD_ERR_SOLVER;
  } catch (const IoError& e) {
    set_error(e.what());
    return GPD_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return GPD_ERR_CONFIG;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* gpd_version(void) { return "1.0.0"; }

const char* gpd_last_error(void) { return t_last_error.c_str(); }

gpd_status gpd_set_threads(int n) {
  return guarded([&] {
    if (n < 0) throw ConfigError("thread count must be >= 0");
    set_thread_count(n);
  });
}

gpd_status gpd_config_parse_file(const char* path, gpd_config** out) {
  return guarded([&] {
    if (!path || !out) throw ConfigError("null argument");
    auto* h = new gpd_config{RunConfig::parse_file(path)};
    *out = h;
  });
}

gpd_status gpd_config_parse_text(const char* text, gpd_config** out) {
  return guarded([&] {
    if (!text || !out) throw ConfigError("null argument");
    auto* h = new gpd_config{RunConfig::parse(text)};
    *out = h;
  });
}

gpd_status gpd_config_set(gpd_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    if (!cfg || !key || !value) throw ConfigError("null argument");
    cfg->cfg.set(key, value);
    cfg->cfg.validate();
  });
}

gpd_status gpd_config_get(const gpd_config* cfg, const char* key, char** out) {
  return guarded([&] {
    if (!cfg || !key || !out) throw ConfigError("null argument");
    *out = dup_string(cfg->cfg.get(key));
  });
}

gpd_status gpd_config_serialize(const gpd_config* cfg, char** out) {
  return guarded([&] {
    if (!cfg || !out) throw ConfigError("null argument");
    *out = dup_string(cfg->cfg.serialize());
  });
}

uint64_t gpd_config_digest(const gpd_config* cfg) {
  return cfg ? cfg->cfg.digest() : 0;
}

int gpd_config_default_count(const gpd_config* cfg) {
  return cfg ? static_cast<int>(cfg->cfg.defaulted.size()) : 0;
}

const char* gpd_config_default_entry(const gpd_config* cfg, int i) {
  if (!cfg || i < 0 || i >= static_cast<int>(cfg->cfg.defaulted.size()))
    return nullptr;
  return cfg->cfg.defaulted[i].c_str();
}

void gpd_config_free(gpd_config* cfg) { delete cfg; }

void gpd_string_free(char* s) { delete[] s; }

gpd_status gpd_calibrate(const gpd_config* cfg, gpd_calibration* out) {
  return guarded([&] {
    if (!cfg || !out) throw ConfigError("null argument");
    const CalibrationReport rep = calibrate(cfg->cfg);
    out->delta = rep.delta;
    out->micromodulus = rep.c;
    out->s0_from_G0 = rep.s0_from_G0;
    out->s0_from_KI = rep.s0_from_KI;
    out->s0_used = rep.s0_used;
    out->G0_implied_by_KI = rep.G0_implied_by_KI;
    out->table_inconsistent = rep.table_inconsistent ? 1 : 0;
    out->stable_dt = rep.stable_dt;
    out->beta = rep.beta;
    out->x_rm = rep.x_rm;
  });
}

gpd_status gpd_oracle_cantilever(double q, double L, double B, double x,
                                 double* w_out) {
  return guarded([&] {
    if (!w_out) throw ConfigError("null argument");
    *w_out = cantilever_deflection(q, L, B, x);
  });
}

gpd_status gpd_oracle_floating_beam(double E, double h, double k, double M0,
                                    double beam_length, double x,
                                    double* w_out, double* x_rm_out) {
  return guarded([&] {
    const BeamOracle oracle = BeamOracle::plane_strain(E, h, k);
    const FloatingBeamOracle fb = floating_beam_xrm(oracle, M0, beam_length);
    if (x_rm_out) *x_rm_out = fb.x_rm;
    if (w_out) *w_out = floating_beam_deflection(oracle, M0, x);
  });
}

gpd_status gpd_run_scenario(const gpd_config* cfg, const char* out_dir,
                            gpd_run** out) {
  return guarded([&] {
    if (!cfg || !out) throw ConfigError("null argument");
    auto* h = new gpd_run;
    try {
      h->result = run_scenario(cfg->cfg, out_dir ? out_dir : "");
    } catch (...) {
      delete h;
      throw;
    }
    *out = h;
  });
}

gpd_status gpd_run_sweep(const gpd_config* cfg, const char* key,
                         const char* values, const char* out_dir,
                         gpd_run** out) {
  return guarded([&] {
    if (!cfg || !key || !values || !out) throw ConfigError("null argument");
    std::vector<std::string> vals;
    std::string cur;
    for (const char* p = values;; ++p) {
      if (*p == ',' || *p == '\0') {
        if (!cur.empty()) vals.push_back(cur);
        cur.clear();
        if (*p == '\0') break;
      } else if (*p != ' ') {
        cur += *p;
      }
    }
    auto* h = new gpd_run;
    h->is_sweep = true;
    try {
      h->sweep = run_sweep(cfg->cfg, key, vals, out_dir ? out_dir : "");
    } catch (...) {
      delete h;
      throw;
    }
    *out = h;
  });
}

gpd_status gpd_run_get_summary(const gpd_run* run, gpd_run_summary* out) {
  return guarded([&] {
    if (!run || !out) throw ConfigError("null argument");
    const RunResult* r = run->is_sweep
                             ? (run->sweep.members.empty()
                                    ? nullptr
                                    : &run->sweep.members.front())
                             : &run->result;
    if (!r) throw ConfigError("empty sweep has no summary");
    const ScenarioResult& s = r->scenario;
    out->sigma_max = s.last_pre_fracture_sigma_max;
    for (const auto& m : s.sweep)
      if (m.sigma_max > out->sigma_max) out->sigma_max = m.sigma_max;
    out->initiation_time = s.metrics.initiation_time;
    out->initiation_x = s.metrics.initiation_site.x;
    out->initiation_y = s.metrics.initiation_site.y;
    out->final_crack_length =
        s.metrics.series.empty() ? 0.0 : s.metrics.series.back()[2];
    out->x_rm = s.x_rm;
    out->stages = static_cast<int>(s.probes.size());
    out->broken_bonds =
        s.probes.empty() ? 0 : s.probes.back().total_breaks;
  });
}

int gpd_run_snapshot_count(const gpd_run* run) {
  if (!run) return 0;
  if (run->is_sweep) {
    int n = 0;
    for (const auto& m : run->sweep.members)
      n += static_cast<int>(m.snapshot_paths.size());
    return n;
  }
  return static_cast<int>(run->result.snapshot_paths.size());
}

const char* gpd_run_snapshot_path(const gpd_run* run, int i) {
  if (!run || i < 0) return nullptr;
  if (run->is_sweep) {
    for (const auto& m : run->sweep.members) {
      if (i < static_cast<int>(m.snapshot_paths.size()))
        return m.snapshot_paths[i].c_str();
      i -= static_cast<int>(m.snapshot_paths.size());
    }
    return nullptr;
  }
  if (i >= static_cast<int>(run->result.snapshot_paths.size())) return nullptr;
  return run->result.snapshot_paths[i].c_str();
}

const char* gpd_run_output_dir(const gpd_run* run) {
  if (!run) return nullptr;
  if (run->is_sweep)
    return run->sweep.members.empty()
               ? nullptr
               : run->sweep.members.front().out_dir.c_str();
  return run->result.out_dir.c_str();
}

int gpd_run_member_count(const gpd_run* run) {
  if (!run) return 0;
  if (run->is_sweep) return static_cast<int>(run->sweep.members.size());
  return static_cast<int>(run->result.scenario.sweep.size());
}

gpd_status gpd_run_member(const gpd_run* run, int i, double* R_over_t,
                          double* sigma_max, double* tip_displacement) {
  return guarded([&] {
    if (!run) throw ConfigError("null argument");
    if (!run->is_sweep) {
      const auto& sweep = run->result.scenario.sweep;
      if (i < 0 || i >= static_cast<int>(sweep.size()))
        throw ConfigError("member index out of range");
      if (R_over_t) *R_over_t = sweep[i].R_over_t;
      if (sigma_max) *sigma_max = sweep[i].sigma_max;
      if (tip_displacement) *tip_displacement = sweep[i].tip_displacement;
      return;
    }
    if (i < 0 || i >= static_cast<int>(run->sweep.members.size()))
      throw ConfigError("member index out of range");
    const ScenarioResult& s = run->sweep.members[i].scenario;
    if (R_over_t)
      *R_over_t = run->sweep.members[i].cfg.geometry.R_over_t;
    double smax = s.last_pre_fracture_sigma_max;
    for (const auto& m : s.sweep) smax = std::max(smax, m.sigma_max);
    if (sigma_max) *sigma_max = smax;
    if (tip_displacement)
      *tip_displacement =
          s.sweep.empty() ? 0.0 : s.sweep.front().tip_displacement;
  });
}

void gpd_run_free(gpd_run* run) { delete run; }

gpd_status gpd_verify_snapshot(const char* path, const gpd_config* cfg) {
  return guarded([&] {
    if (!path || !cfg) throw ConfigError("null argument");
    if (!verify_snapshot_digest(path, cfg->cfg))
      throw ConfigError("snapshot digest does not match the config");
  });
}

}  // extern "C"
