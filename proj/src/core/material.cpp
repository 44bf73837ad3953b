#include "core/material.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/geometry.hpp"

namespace gpd {

void IceMaterial::validate() const {
  if (E <= 0.0) throw ConfigError("material: E must be positive");
  if (rho_i <= 0.0) throw ConfigError("material: rho_i must be positive");
  if (G0 <= 0.0) throw ConfigError("material: G0 must be positive");
  if (K_I <= 0.0) throw ConfigError("material: K_I must be positive");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw ConfigError("material: gamma must be in (0, 1]");
}

double micromodulus(double E, double delta, ElasticMode mode,
                    double thickness) {
  if (E <= 0.0 || delta <= 0.0)
    throw ConfigError("micromodulus: E and delta must be positive");
  switch (mode) {
    case ElasticMode::ThreeD:
      return 12.0 * E / (M_PI * delta * delta * delta * delta);
    case ElasticMode::PlaneStress:
      if (thickness <= 0.0)
        throw ConfigError("micromodulus: thickness must be positive in 2D");
      return 9.0 * E / (M_PI * thickness * delta * delta * delta);
    case ElasticMode::PlaneStrain:
      if (thickness <= 0.0)
        throw ConfigError("micromodulus: thickness must be positive in 2D");
      return 48.0 * E / (5.0 * M_PI * thickness * delta * delta * delta);
  }
  throw ConfigError("micromodulus: unknown elastic mode");
}

double critical_stretch_from_G0(double G0, double E, double delta) {
  if (delta <= 0.0) throw ConfigError("critical_stretch: delta must be positive");
  return std::sqrt(5.0 * M_PI * G0 / (18.0 * E * delta));
}

double critical_stretch_from_KI(double K_I, double E, double delta) {
  if (delta <= 0.0) throw ConfigError("critical_stretch: delta must be positive");
  return std::sqrt(5.0 * M_PI * K_I * K_I / (18.0 * E * E * delta));
}

double critical_stretch(const IceMaterial& mat, double delta) {
  return mat.s0_source == S0Source::FromG0
             ? critical_stretch_from_G0(mat.G0, mat.E, delta)
             : critical_stretch_from_KI(mat.K_I, mat.E, delta);
}

double softening_factor(double s, double s0, double gamma, double alpha_theta) {
  if (s >= s0) return 0.0;
  const double yield = gamma * s0;
  if (s <= yield) return 1.0;
  // gamma = 1 leaves an empty softening branch; unreachable here.
  double mu = (s0 - (s - alpha_theta)) / (s0 - yield);
  if (mu < 0.0) return 0.0;
  if (mu > 1.0) return 1.0;
  return mu;
}

void BondState::update(double stretch, double s0, double gamma,
                       double alpha_theta) {
  s = stretch;
  if (stretch > s_hist_max) s_hist_max = stretch;
  if (s_hist_max >= s0) broken = true;
  mu = broken ? 0.0 : mu_effective(s, s_hist_max, s0, gamma, alpha_theta);
}

double bond_force_density(const BondState& bond, double c) {
  if (bond.broken) return 0.0;
  return c * bond.s * bond.mu;
}

double damage_index(int point, const BondList& bonds,
                    const MaterialPointSet& points,
                    const double* mu_eff_per_bond) {
  double num = 0.0;
  double den = 0.0;
  for (std::int32_t k = bonds.inc_offset[point];
       k < bonds.inc_offset[point + 1]; ++k) {
    const std::int32_t b = bonds.inc_bond[k];
    const int other = bonds.inc_sign[k] > 0 ? bonds.j[b] : bonds.i[b];
    const double w = points.volumes[other] * bonds.volume_factor[b];
    num += mu_eff_per_bond[b] * w;
    den += w;
  }
  if (den <= 0.0) return 0.0;
  return 1.0 - num / den;
}

const char* to_string(ElasticMode mode) {
  switch (mode) {
    case ElasticMode::ThreeD: return "3d";
    case ElasticMode::PlaneStress: return "plane_stress";
    case ElasticMode::PlaneStrain: return "plane_strain";
  }
  return "?";
}

}  // namespace gpd
