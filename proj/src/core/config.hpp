#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "core/material.hpp"
#include "core/solver.hpp"

namespace gpd {

enum class ScenarioKind { FrontCollapse, FootLoose };
enum class RunMode { StaticSweep, Erosion };

struct GeometryConfig {
  // frontcollapse (Fig.-10 style overhang)
  double a = 10.0;
  double b = 9.0;
  double t = 1.0;
  double R_over_t = 0.3;
  // footloose (floating beam)
  double L = 40.0;
  double h = 1.0;
  // shared
  double dx = 0.05;
  double thickness = 1.0;
  double m_ratio = 3.015;
  bool surface_correction = true;
};

struct GravityConfig {
  bool enabled = true;
  double g = 9.81;
};

struct SupportConfig {
  bool enabled = true;
  double k_s = 1.0055e4;       // N/m^3, linearized hydrostatic rho_w*g
  double v_e = 0.4;            // m/day in configs; SI conversion on use
  double stage_dt = 0.0;       // s per stage; 0 => one support column
  int max_stages = 100000;
  double max_eroded_length = 0.0;  // 0 => until the front reaches x = 0
  bool stop_on_fracture = false;

  double v_e_si() const { return v_e / 86400.0; }
};

struct BuoyancyConfig {
  bool enabled = false;
  double rho_w = 1025.0;
  double h = 0.0;  // 0 => geometry h
};

struct MomentConfig {
  bool enabled = false;
  double M0 = 0.0;
  double f = 0.1;
  double band_width = 0.0;  // 0 => one horizon
  MomentMode mode = MomentMode::Constant;
};

struct OutputConfig {
  std::string dir = "out";
  int snapshot_every = 1;  // stages between snapshots
  int probe_every = 1;     // stages between stress probes
};

// One file fully determines a run. Parsing fills defaults and records every
// default fill in `defaulted`; serialization is canonical and total, so
// parse(serialize(c)) == c and the digest is reproducible.
struct RunConfig {
  ScenarioKind scenario = ScenarioKind::FrontCollapse;
  RunMode mode = RunMode::Erosion;
  std::vector<double> r_over_t_values = {0.3, 0.5, 0.7, 0.9};

  GeometryConfig geometry;
  IceMaterial material;
  GravityConfig gravity;
  SupportConfig support;
  BuoyancyConfig buoyancy;
  MomentConfig moment;
  IntegratorConfig integrator;
  OutputConfig output;

  std::vector<std::string> defaulted;  // audit of filled defaults

  static RunConfig parse(const std::string& text);
  static RunConfig parse_file(const std::string& path);
  std::string serialize() const;
  std::uint64_t digest() const;
  std::string digest_hex() const;

  // Assign one key, "section.key" or a bare key unique across sections
  // (sweep --vary uses this).
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  void validate() const;

  double delta() const { return geometry.m_ratio * geometry.dx; }
  double buoyancy_h() const {
    return buoyancy.h > 0.0 ? buoyancy.h : geometry.h;
  }
};

std::uint64_t fnv1a64(const std::string& data);

}  // namespace gpd
