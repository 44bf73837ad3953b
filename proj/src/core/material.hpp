#pragma once
#include <string>

namespace gpd {

enum class ElasticMode { ThreeD, PlaneStress, PlaneStrain };

enum class S0Source { FromG0, FromKI };

// Quasi-brittle ice bond law parameters. nu is informational only: the
// bond-based lattice fixes Poisson's ratio (1/4 in plane strain) and the
// stored value feeds the analytic beam oracles, never the bond force.
struct IceMaterial {
  double E = 9.31e9;       // Pa
  double rho_i = 897.6;    // kg/m^3
  double nu = 0.33;
  double G0 = 5.0;         // J/m^2
  double K_I = 134.0e3;    // Pa*sqrt(m)
  double gamma = 0.9;      // yield-stretch ratio, softening starts at gamma*s0
  double alpha = 0.0;      // coupling coefficient for the alpha_theta hook
  S0Source s0_source = S0Source::FromG0;

  void validate() const;
  // G0 a given K_I would imply (K_I^2/E); Table-1 style inputs are mutually
  // inconsistent when this differs from G0.
  double implied_G0_from_KI() const { return K_I * K_I / E; }
};

// Bond stiffness density calibrated against classical elasticity.
double micromodulus(double E, double delta, ElasticMode mode, double thickness);

double critical_stretch_from_G0(double G0, double E, double delta);
double critical_stretch_from_KI(double K_I, double E, double delta);
double critical_stretch(const IceMaterial& mat, double delta);

// History-dependent softening factor: 1 below gamma*s0, linear decay to 0 at
// s0, 0 beyond. alpha_theta shifts the softening branch; it defaults to 0
// because its driving quantity is left open upstream.
double softening_factor(double s, double s0, double gamma, double alpha_theta);

// Per-bond evolving state for the single-bond operations; the solver keeps
// the same quantities in arrays.
struct BondState {
  double s = 0.0;
  double s_hist_max = 0.0;
  double mu = 1.0;
  bool broken = false;

  void update(double stretch, double s0, double gamma, double alpha_theta);
};

// Effective softening factor with irreversibility: min over the history.
inline double mu_effective(double s, double s_hist_max, double s0, double gamma,
                           double alpha_theta) {
  if (s_hist_max >= s0) return 0.0;
  const double mu_now = softening_factor(s, s0, gamma, alpha_theta);
  const double mu_hist = softening_factor(s_hist_max, s0, gamma, alpha_theta);
  return mu_now < mu_hist ? mu_now : mu_hist;
}

// Scalar force density along the deformed bond direction, Eq. f = c*s*mu.
double bond_force_density(const BondState& bond, double c);

const char* to_string(ElasticMode mode);

struct BondList;
struct MaterialPointSet;

// Volume-weighted damage index over the bonds incident to a point; 0 for an
// isolated point.
double damage_index(int point, const BondList& bonds,
                    const MaterialPointSet& points,
                    const double* mu_eff_per_bond);

}  // namespace gpd
