// Command-line driver for the glacierpd shared library. Talks to the solver
// exclusively through the C API in glacierpd.h.
//
// Exit codes: 0 success, 2 config error, 3 solver failure, 4 IO failure.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "glacierpd.h"

namespace {

int status_to_exit(gpd_status st) {
  switch (st) {
    case GPD_OK: return 0;
    case GPD_ERR_CONFIG: return 2;
    case GPD_ERR_SOLVER: return 3;
    case GPD_ERR_IO: return 4;
  }
  return 2;
}

int fail(gpd_status st) {
  std::fprintf(stderr, "error: %s\n", gpd_last_error());
  return status_to_exit(st);
}

gpd_config* load_config(const std::string& path,
                        const std::vector<std::string>& sets, gpd_status* st) {
  gpd_config* cfg = nullptr;
  *st = gpd_config_parse_file(path.c_str(), &cfg);
  if (*st != GPD_OK) return nullptr;
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      gpd_config_free(cfg);
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n",
                   kv.c_str());
      *st = GPD_ERR_CONFIG;
      return nullptr;
    }
    *st = gpd_config_set(cfg, kv.substr(0, eq).c_str(),
                         kv.substr(eq + 1).c_str());
    if (*st != GPD_OK) {
      gpd_config_free(cfg);
      return nullptr;
    }
  }
  return cfg;
}

void print_defaults_audit(const gpd_config* cfg) {
  const int n = gpd_config_default_count(cfg);
  for (int i = 0; i < n; ++i)
    std::fprintf(stderr, "default: %s\n", gpd_config_default_entry(cfg, i));
}

int run_one(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& sets, bool audit) {
  gpd_status st;
  gpd_config* cfg = load_config(config_path, sets, &st);
  if (!cfg) return fail(st);
  if (audit) print_defaults_audit(cfg);

  gpd_run* run = nullptr;
  st = gpd_run_scenario(cfg, out_dir.empty() ? nullptr : out_dir.c_str(), &run);
  if (st != GPD_OK) {
    gpd_config_free(cfg);
    return fail(st);
  }
  gpd_run_summary sum{};
  gpd_run_get_summary(run, &sum);
  std::printf("run complete: %s\n", gpd_run_output_dir(run));
  std::printf("  stages               = %d\n", sum.stages);
  std::printf("  broken bonds         = %lld\n",
              static_cast<long long>(sum.broken_bonds));
  std::printf("  sigma_max (pre-frac) = %.6e Pa\n", sum.sigma_max);
  if (sum.initiation_time >= 0.0) {
    std::printf("  crack initiation     = t %.6e s at (%.4f, %.4f)\n",
                sum.initiation_time, sum.initiation_x, sum.initiation_y);
    std::printf("  final crack length   = %.6e m\n", sum.final_crack_length);
  } else {
    std::printf("  crack initiation     = none\n");
  }
  if (sum.x_rm >= 0.0)
    std::printf("  moat distance x_RM   = %.6e m\n", sum.x_rm);
  const int members = gpd_run_member_count(run);
  for (int i = 0; i < members; ++i) {
    double r, smax, tip;
    if (gpd_run_member(run, i, &r, &smax, &tip) == GPD_OK)
      std::printf("  member R/t=%.3f: sigma_max=%.6e Pa tip=%.6e m\n", r, smax,
                  tip);
  }
  gpd_run_free(run);
  gpd_config_free(cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glacierpd: peridynamic ice-shelf calving simulator"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker cap (0 = GLACIER_PD_THREADS or auto)");

  std::string config_path, out_dir, vary_key, values;
  std::vector<std::string> sets;
  bool audit = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "run configuration file")
        ->required();
    sub->add_option("--out", out_dir, "output directory override");
    sub->add_option("--set", sets, "override key=value (repeatable)");
    sub->add_flag("--audit-defaults", audit, "echo filled defaults to stderr");
  };

  CLI::App* front = app.add_subcommand(
      "frontcollapse", "gravity-driven frontal collapse (scenario 1)");
  add_common(front);
  CLI::App* foot = app.add_subcommand(
      "footloose", "buoyancy/moment foot loosening (scenario 2)");
  add_common(foot);
  CLI::App* sweep =
      app.add_subcommand("sweep", "run a family of configs varying one key");
  add_common(sweep);
  sweep->add_option("--vary", vary_key, "key to vary (e.g. R_over_t, v_e)")
      ->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  CLI::App* calib = app.add_subcommand(
      "calibrate", "print derived constants (c, s0, dt, beta, x_RM)");
  add_common(calib);
  CLI::App* oracle =
      app.add_subcommand("oracle", "print analytic beam-oracle tables");
  add_common(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 prints its own message; map parse failures onto config errors
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (gpd_set_threads(threads) != GPD_OK) return fail(GPD_ERR_CONFIG);

  if (front->parsed() || foot->parsed()) {
    // subcommand names double-check the scenario in the config
    gpd_status st;
    gpd_config* cfg = load_config(config_path, sets, &st);
    if (!cfg) return fail(st);
    char* scen = nullptr;
    gpd_config_get(cfg, "run.scenario", &scen);
    const bool is_front = scen && std::string(scen) == "frontcollapse";
    gpd_string_free(scen);
    gpd_config_free(cfg);
    if (front->parsed() && !is_front) {
      std::fprintf(stderr,
                   "error: frontcollapse subcommand with a footloose config\n");
      return 2;
    }
    if (foot->parsed() && is_front) {
      std::fprintf(stderr,
                   "error: footloose subcommand with a frontcollapse config\n");
      return 2;
    }
    return run_one(config_path, out_dir, sets, audit);
  }

  if (sweep->parsed()) {
    gpd_status st;
    gpd_config* cfg = load_config(config_path, sets, &st);
    if (!cfg) return fail(st);
    if (audit) print_defaults_audit(cfg);
    gpd_run* run = nullptr;
    st = gpd_run_sweep(cfg, vary_key.c_str(), values.c_str(),
                       out_dir.empty() ? nullptr : out_dir.c_str(), &run);
    if (st != GPD_OK) {
      gpd_config_free(cfg);
      return fail(st);
    }
    std::printf("sweep complete: %d members\n", gpd_run_member_count(run));
    gpd_run_free(run);
    gpd_config_free(cfg);
    return 0;
  }

  if (calib->parsed()) {
    gpd_status st;
    gpd_config* cfg = load_config(config_path, sets, &st);
    if (!cfg) return fail(st);
    if (audit) print_defaults_audit(cfg);
    gpd_calibration rep{};
    st = gpd_calibrate(cfg, &rep);
    gpd_config_free(cfg);
    if (st != GPD_OK) return fail(st);
    std::printf("delta             = %.9e m\n", rep.delta);
    std::printf("micromodulus c    = %.9e N/m^6 (plane strain)\n",
                rep.micromodulus);
    std::printf("s0 (from G0)      = %.9e\n", rep.s0_from_G0);
    std::printf("s0 (from K_I)     = %.9e\n", rep.s0_from_KI);
    std::printf("s0 in use         = %.9e\n", rep.s0_used);
    std::printf("G0 implied by K_I = %.9e J/m^2\n", rep.G0_implied_by_KI);
    if (rep.table_inconsistent)
      std::printf(
          "WARNING: G0 and K_I^2/E are mutually inconsistent; s0_source "
          "selects which governs\n");
    std::printf("stable dt         = %.9e s\n", rep.stable_dt);
    std::printf("beta              = %.9e 1/m\n", rep.beta);
    if (rep.x_rm >= 0.0)
      std::printf("oracle x_RM       = %.9e m\n", rep.x_rm);
    else
      std::printf("oracle x_RM       = n/a (beam below semi-infinite regime)\n");
    return 0;
  }

  if (oracle->parsed()) {
    gpd_status st;
    gpd_config* cfg = load_config(config_path, sets, &st);
    if (!cfg) return fail(st);
    gpd_calibration rep{};
    st = gpd_calibrate(cfg, &rep);
    if (st != GPD_OK) {
      gpd_config_free(cfg);
      return fail(st);
    }
    auto grab = [&](const char* k, double dflt) {
      char* v = nullptr;
      if (gpd_config_get(cfg, k, &v) != GPD_OK || !v) return dflt;
      const double d = std::stod(v);
      gpd_string_free(v);
      return d;
    };
    const double E = grab("material.E", 9.31e9);
    const double rho_i = grab("material.rho_i", 897.6);
    const double rho_w = grab("buoyancy.rho_w", 1025.0);
    const double g = grab("gravity.g", 9.81);
    const double h = grab("geometry.h", 1.0);
    const double L = grab("geometry.L", 40.0);
    const double M0 = grab("moment.M0", 1.0);
    const double Eeff = E / (1.0 - 0.25 * 0.25);
    const double B = Eeff * h * h * h / 12.0;
    const double q = rho_i * g * h;
    std::printf("# cantilever oracle: q=%.6e N/m, L=%.6e m, B=%.6e N*m\n", q, L,
                B);
    std::printf("x,w_cantilever\n");
    for (int k = 0; k <= 20; ++k) {
      const double x = L * k / 20.0;
      double w = 0.0;
      gpd_oracle_cantilever(q, L, B, x, &w);
      std::printf("%.6e,%.9e\n", x, w);
    }
    double xrm = -1.0;
    std::printf("# floating-beam oracle: k=%.6e N/m^3, M0=%.6e N*m\n",
                rho_w * g, M0);
    st = gpd_oracle_floating_beam(E, h, rho_w * g, M0, L, 0.0, nullptr, &xrm);
    if (st == GPD_OK) {
      std::printf("x,w_floating\n");
      for (int k = 0; k <= 40; ++k) {
        const double x = L * k / 40.0;
        double w = 0.0;
        gpd_oracle_floating_beam(E, h, rho_w * g, M0, L, x, &w, nullptr);
        std::printf("%.6e,%.9e\n", x, w);
      }
      std::printf("# x_RM = %.9e m (beta = %.9e 1/m)\n", xrm, rep.beta);
    } else {
      std::printf("# floating-beam oracle invalid: %s\n", gpd_last_error());
    }
    gpd_config_free(cfg);
    return 0;
  }

  return 2;
}
