#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/snapshot.hpp"
#include "doctest.h"

using namespace gpd;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string tmpdir() {
  auto d = std::filesystem::temp_directory_path() / "gpd_unit_io";
  std::filesystem::create_directories(d);
  return d.string();
}

}  // namespace

TEST_CASE("minimal config parses with defaults and an audit trail") {
  RunConfig cfg = RunConfig::parse("[run]\nscenario = frontcollapse\n");
  CHECK(cfg.scenario == ScenarioKind::FrontCollapse);
  CHECK(cfg.geometry.m_ratio == doctest::Approx(3.015));
  CHECK(!cfg.defaulted.empty());
  bool saw_gamma = false;
  for (const auto& d : cfg.defaulted)
    if (d.find("[material] gamma") != std::string::npos) saw_gamma = true;
  CHECK(saw_gamma);
}

TEST_CASE("parse errors carry line numbers") {
  const char* bad_key =
      "[run]\nscenario = frontcollapse\n[material]\nnonsense = 3\n";
  try {
    RunConfig::parse(bad_key);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    CHECK(std::string(e.what()).find("nonsense") != std::string::npos);
  }
  CHECK_THROWS_AS(RunConfig::parse("[nosuch]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("scenario = frontcollapse\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[run]\nmode erosion\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[run]\nmode = erosion\n"), ConfigError);
  CHECK_THROWS_AS(
      RunConfig::parse("[run]\nscenario = frontcollapse\n[material]\nE = x\n"),
      ConfigError);
}

TEST_CASE("geometry bounds are validated") {
  const std::string base = "[run]\nscenario = frontcollapse\n[geometry]\n";
  try {
    RunConfig::parse(base + "R_over_t = 1.2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("[0.1, 0.9]") != std::string::npos);
  }
  CHECK_NOTHROW(RunConfig::parse(base + "R_over_t = 0.9\n"));
}

TEST_CASE("round trip: parse, serialize, parse") {
  const std::string text =
      "[run]\nscenario = footloose\n[geometry]\nL = 12.5\nh = 0.5\n"
      "dx = 0.0625\n[material]\nE = 2e7\ngamma = 0.85\n"
      "[moment]\nenabled = true\nM0 = 123.456\nmode = sinusoidal\n"
      "[support]\nv_e = 0.2\n";
  RunConfig a = RunConfig::parse(text);
  const std::string ser_a = a.serialize();
  RunConfig b = RunConfig::parse(ser_a);
  CHECK(b.serialize() == ser_a);
  CHECK(a.digest() == b.digest());
  CHECK(b.defaulted.empty());  // a full serialization defaults nothing
  CHECK(a.geometry.L == 12.5);
  CHECK(a.material.gamma == 0.85);
  CHECK(a.moment.mode == MomentMode::Sinusoidal);
  CHECK(a.support.v_e_si() == doctest::Approx(0.2 / 86400.0));
}

TEST_CASE("set and get by dotted or unique bare key") {
  RunConfig cfg = RunConfig::parse("[run]\nscenario = frontcollapse\n");
  cfg.set("R_over_t", "0.7");
  CHECK(cfg.geometry.R_over_t == 0.7);
  cfg.set("support.v_e", "0.8");
  CHECK(cfg.support.v_e == 0.8);
  CHECK(cfg.get("support.v_e") == "0.8");
  CHECK_THROWS_AS(cfg.set("h", "1.0"), ConfigError);     // ambiguous
  CHECK_THROWS_AS(cfg.set("nope", "1.0"), ConfigError);  // unknown
  CHECK_NOTHROW(cfg.set("geometry.h", "1.0"));
}

TEST_CASE("snapshots: exact zeros, determinism, digest verification") {
  RunConfig cfg = RunConfig::parse(
      "[run]\nscenario = frontcollapse\n[geometry]\ndx = 0.25\n");
  MaterialPointSet ps = discretize_rectangle(2.0, 1.0, 0.25, 1.0);
  const HorizonSpec hor = HorizonSpec::from_dx(0.25, 3.015);
  BondList bonds = build_bonds(ps, hor);
  IceMaterial mat;
  LoadSet loads;
  loads.gravity.enabled = false;
  Model model(std::move(ps), std::move(bonds), mat, hor.delta,
              ElasticMode::PlaneStrain, loads);
  SimulationState st = model.make_state();
  const VirialStressField field = stress_field(model, st);

  const std::string dir = tmpdir();
  const std::string p1 = dir + "/a.csv";
  const std::string p2 = dir + "/b.csv";
  write_snapshot(p1, model, st, field, cfg.digest_hex());
  write_snapshot(p2, model, st, field, cfg.digest_hex());
  const std::string body1 = slurp(p1);
  CHECK(body1 == slurp(p2));

  // undeformed state: all data columns exactly zero
  std::istringstream lines(body1);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  std::getline(lines, line);
  CHECK(line == "id,x,y,ux,uy,damage,s11,s22,s12,s21");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    const auto first_comma = line.find(',');
    std::string rest = line.substr(first_comma + 1);
    // columns 3..10 are zero
    int col = 0;
    std::istringstream fields(rest);
    std::string fld;
    while (std::getline(fields, fld, ',')) {
      if (col >= 2) CHECK(fld == "0.00000000e+00");
      ++col;
    }
  }
  CHECK(rows == model.points().size());

  CHECK(verify_snapshot_digest(p1, cfg));
  RunConfig other = cfg;
  other.set("geometry.dx", "0.125");
  CHECK(!verify_snapshot_digest(p1, other));

  const SnapshotHeader header = read_snapshot_header(p1);
  CHECK(header.stage == 0);
  CHECK(header.config_digest_hex == cfg.digest_hex());
}

TEST_CASE("empty point set writes a header-only snapshot") {
  RunConfig cfg = RunConfig::parse("[run]\nscenario = frontcollapse\n");
  MaterialPointSet ps;
  ps.dx = 1.0;
  BondList bonds = build_bonds(ps, HorizonSpec::from_dx(1.0, 2.0));
  IceMaterial mat;
  LoadSet loads;
  Model model(std::move(ps), std::move(bonds), mat, 2.0,
              ElasticMode::PlaneStrain, loads);
  SimulationState st = model.make_state();
  const VirialStressField field = stress_field(model, st);
  const std::string path = tmpdir() + "/empty.csv";
  write_snapshot(path, model, st, field, cfg.digest_hex());
  int lines = 0;
  std::istringstream body(slurp(path));
  std::string line;
  while (std::getline(body, line)) ++lines;
  CHECK(lines == 3);  // two header lines + column header, no rows
}

TEST_CASE("fnv digest is stable") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") != fnv1a64("b"));
}
