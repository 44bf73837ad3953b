#pragma once
#include <vector>

#include "core/vec2.hpp"

namespace gpd {

struct MaterialPointSet;

struct GravityLoad {
  bool enabled = true;
  double g = 9.81;  // m/s^2, acting downward
};

// Erodible elastic foundation under the tagged support row. k_s is a per-area
// stiffness (N/m^3); the reaction is a traction k_s * u_y that the solver
// spreads over the support-row cell height when forming body-force densities.
struct FoundationSupport {
  bool enabled = false;
  double k_s = 0.0;     // N/m^3
  double v_e = 0.0;     // m/s (configs speak m/day)
  double L = 0.0;       // initial erosion-front position
};

struct BuoyancyLoad {
  bool enabled = false;
  double rho_w = 1025.0;  // kg/m^3
  double h = 0.0;         // shelf thickness entering Eq. q_b
};

enum class MomentMode { Constant, Sinusoidal };

// Wave-induced frontal bending moment realized as a horizontal force couple
// on the tagged top/bottom bands near the free end.
struct MomentLoad {
  bool enabled = false;
  double M0 = 0.0;          // N*m per unit width
  double f = 0.1;           // Hz
  double band_width = 0.0;  // 0 => one horizon
  MomentMode mode = MomentMode::Constant;
};

Vec2 gravity_density(double rho_i, double g);

// Eq. x_front = max(L - v_e * t, 0); the front sweeps right to left.
double erosion_front(double t, double L, double v_e);

// Foundation reaction per unit base area for a supported point; restoring
// sign (the printed law is non-restoring and would be unstable).
Vec2 support_reaction(double u_y, bool supported, double k_s);

// Net buoyancy per unit length, Eq. q_b = (rho_w - rho_i) g h. A sinking
// shelf (rho_w <= rho_i) is reported by the caller, not an error.
double buoyancy_line_load(double rho_w, double rho_i, double g, double h);

double moment_value(const MomentLoad& load, double t);

// Uniform force densities on the two bands realizing moment M: +x on top,
// -x on bottom, F * lever_arm = M with F shared by volume.
struct CoupleDensities {
  Vec2 top;
  Vec2 bottom;
  double lever_arm = 0.0;
};
CoupleDensities moment_couple(double M, double lever_arm, double top_volume,
                              double bottom_volume);

// Volume-weighted centroid distance between the two band point sets.
double band_lever_arm(const MaterialPointSet& ps);

}  // namespace gpd
