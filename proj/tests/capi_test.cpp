#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "glacierpd.h"

namespace {

const char* kTinyStatic =
    "[run]\n"
    "scenario = frontcollapse\n"
    "mode = static_sweep\n"
    "R_over_t_values = 0.5\n"
    "[geometry]\n"
    "a = 2.0\nb = 1.5\nt = 0.4\ndx = 0.05\n"
    "[material]\n"
    "E = 1e7\nG0 = 1e9\n"
    "[integrator]\n"
    "relax_tol = 5.0\nrelax_max_iters = 100000\n";

std::string outdir(const char* leaf) {
  auto d = std::filesystem::temp_directory_path() / "gpd_capi" / leaf;
  std::filesystem::remove_all(d);
  return d.string();
}

}  // namespace

TEST_CASE("version and error text are always available") {
  CHECK(gpd_version() != nullptr);
  CHECK(gpd_last_error() != nullptr);
}

TEST_CASE("config lifecycle: parse, set, get, serialize, digest, audit") {
  gpd_config* cfg = nullptr;
  REQUIRE(gpd_config_parse_text("[run]\nscenario = footloose\n", &cfg) ==
          GPD_OK);
  CHECK(gpd_config_digest(cfg) != 0);
  CHECK(gpd_config_default_count(cfg) > 10);
  CHECK(gpd_config_default_entry(cfg, 0) != nullptr);

  CHECK(gpd_config_set(cfg, "geometry.L", "12.0") == GPD_OK);
  char* val = nullptr;
  REQUIRE(gpd_config_get(cfg, "geometry.L", &val) == GPD_OK);
  CHECK(std::string(val) == "12");
  gpd_string_free(val);

  const uint64_t d1 = gpd_config_digest(cfg);
  CHECK(gpd_config_set(cfg, "geometry.L", "14.0") == GPD_OK);
  CHECK(gpd_config_digest(cfg) != d1);

  char* text = nullptr;
  REQUIRE(gpd_config_serialize(cfg, &text) == GPD_OK);
  gpd_config* cfg2 = nullptr;
  REQUIRE(gpd_config_parse_text(text, &cfg2) == GPD_OK);
  CHECK(gpd_config_digest(cfg2) == gpd_config_digest(cfg));
  gpd_string_free(text);
  gpd_config_free(cfg2);
  gpd_config_free(cfg);
}

TEST_CASE("config errors surface with messages and the config status") {
  gpd_config* cfg = nullptr;
  CHECK(gpd_config_parse_text("[run]\nscenario = nope\n", &cfg) ==
        GPD_ERR_CONFIG);
  CHECK(std::strlen(gpd_last_error()) > 0);
  CHECK(gpd_config_parse_file("/no/such/file.ini", &cfg) == GPD_ERR_IO);
}

TEST_CASE("calibration reproduces the derived constants") {
  gpd_config* cfg = nullptr;
  REQUIRE(gpd_config_parse_text(
              "[run]\nscenario = frontcollapse\n[geometry]\ndx = 0.1\n"
              "m_ratio = 3.0\n",
              &cfg) == GPD_OK);
  gpd_calibration rep{};
  REQUIRE(gpd_calibrate(cfg, &rep) == GPD_OK);
  CHECK(std::abs(rep.delta - 0.3) < 1e-12);
  CHECK(std::abs(rep.s0_from_G0 - 3.9525e-5) / 3.9525e-5 < 1e-3);
  CHECK(std::abs(rep.micromodulus - 1.0537e12) / 1.0537e12 < 1e-3);
  CHECK(std::abs(rep.G0_implied_by_KI - 1.9287) < 1e-3);
  CHECK(rep.table_inconsistent == 1);
  CHECK(rep.stable_dt > 0.0);
  gpd_config_free(cfg);
}

TEST_CASE("beam oracles through the C surface") {
  double w = -1.0;
  REQUIRE(gpd_oracle_cantilever(8805.5, 10.0, 8.2756e8, 0.0, &w) == GPD_OK);
  CHECK(w == 0.0);
  REQUIRE(gpd_oracle_cantilever(8805.5, 10.0, 8.2756e8, 10.0, &w) == GPD_OK);
  CHECK(std::abs(w - 8805.5 * 1e4 / (8.0 * 8.2756e8)) < 1e-9);

  double xrm = 0.0;
  REQUIRE(gpd_oracle_floating_beam(2e7, 1.0, 1025.0 * 9.81, 1e3, 100.0, 0.0,
                                   nullptr, &xrm) == GPD_OK);
  CHECK(xrm > 0.0);
  double xrm2 = 0.0;
  REQUIRE(gpd_oracle_floating_beam(2e7, 1.0, 1025.0 * 9.81, 2e3, 100.0, 0.0,
                                   nullptr, &xrm2) == GPD_OK);
  CHECK(xrm == xrm2);
  CHECK(gpd_oracle_floating_beam(2e7, 1.0, 1025.0 * 9.81, 1e3, 1.0, 0.0,
                                 nullptr, &xrm) == GPD_ERR_CONFIG);
}

TEST_CASE("a tiny static sweep runs end to end") {
  gpd_config* cfg = nullptr;
  REQUIRE(gpd_config_parse_text(kTinyStatic, &cfg) == GPD_OK);
  const std::string dir = outdir("static");
  gpd_run* run = nullptr;
  REQUIRE(gpd_run_scenario(cfg, dir.c_str(), &run) == GPD_OK);

  CHECK(gpd_run_member_count(run) == 1);
  double r = 0.0, smax = 0.0, tip = 0.0;
  REQUIRE(gpd_run_member(run, 0, &r, &smax, &tip) == GPD_OK);
  CHECK(r == 0.5);
  CHECK(smax > 0.0);
  CHECK(tip > 0.0);
  CHECK(gpd_run_member(run, 5, &r, &smax, &tip) == GPD_ERR_CONFIG);

  REQUIRE(gpd_run_snapshot_count(run) >= 1);
  const char* snap = gpd_run_snapshot_path(run, 0);
  REQUIRE(snap != nullptr);
  CHECK(gpd_verify_snapshot(snap, cfg) == GPD_OK);

  gpd_config* other = nullptr;
  REQUIRE(gpd_config_parse_text(kTinyStatic, &other) == GPD_OK);
  REQUIRE(gpd_config_set(other, "geometry.dx", "0.1") == GPD_OK);
  CHECK(gpd_verify_snapshot(snap, other) == GPD_ERR_CONFIG);
  gpd_config_free(other);

  gpd_run_summary sum{};
  REQUIRE(gpd_run_get_summary(run, &sum) == GPD_OK);
  CHECK(sum.sigma_max > 0.0);
  CHECK(sum.initiation_time < 0.0);  // elastic sweep: no crack

  gpd_run_free(run);
  gpd_config_free(cfg);
}

TEST_CASE("thread cap is accepted and does not change results") {
  gpd_config* cfg = nullptr;
  REQUIRE(gpd_config_parse_text(kTinyStatic, &cfg) == GPD_OK);

  REQUIRE(gpd_set_threads(1) == GPD_OK);
  const std::string d1 = outdir("t1");
  gpd_run* r1 = nullptr;
  REQUIRE(gpd_run_scenario(cfg, d1.c_str(), &r1) == GPD_OK);

  REQUIRE(gpd_set_threads(3) == GPD_OK);
  const std::string d2 = outdir("t3");
  gpd_run* r2 = nullptr;
  REQUIRE(gpd_run_scenario(cfg, d2.c_str(), &r2) == GPD_OK);
  REQUIRE(gpd_set_threads(0) == GPD_OK);

  double ra, sa, ta, rb, sb, tb;
  REQUIRE(gpd_run_member(r1, 0, &ra, &sa, &ta) == GPD_OK);
  REQUIRE(gpd_run_member(r2, 0, &rb, &sb, &tb) == GPD_OK);
  CHECK(sa == sb);
  CHECK(ta == tb);
  CHECK(gpd_set_threads(-2) == GPD_ERR_CONFIG);

  gpd_run_free(r1);
  gpd_run_free(r2);
  gpd_config_free(cfg);
}
