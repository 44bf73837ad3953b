#include "core/loads.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/geometry.hpp"

namespace gpd {

Vec2 gravity_density(double rho_i, double g) { return {0.0, -rho_i * g}; }

double erosion_front(double t, double L, double v_e) {
  return std::max(L - v_e * t, 0.0);
}

Vec2 support_reaction(double u_y, bool supported, double k_s) {
  if (!supported) return {0.0, 0.0};
  return {0.0, -k_s * u_y};
}

double buoyancy_line_load(double rho_w, double rho_i, double g, double h) {
  if (h <= 0.0) throw ConfigError("buoyancy: h must be positive");
  return (rho_w - rho_i) * g * h;
}

double moment_value(const MomentLoad& load, double t) {
  if (!load.enabled) return 0.0;
  if (load.mode == MomentMode::Constant) return load.M0;
  return load.M0 * std::sin(2.0 * M_PI * load.f * t);
}

CoupleDensities moment_couple(double M, double lever_arm, double top_volume,
                              double bottom_volume) {
  if (lever_arm <= 0.0)
    throw ConfigError("moment couple: zero lever arm between bands");
  if (top_volume <= 0.0 || bottom_volume <= 0.0)
    throw ConfigError("moment couple: empty band");
  const double F = M / lever_arm;  // total force per band
  CoupleDensities out;
  out.lever_arm = lever_arm;
  out.top = {F / top_volume, 0.0};
  out.bottom = {-F / bottom_volume, 0.0};
  return out;
}

double band_lever_arm(const MaterialPointSet& ps) {
  double vt = 0.0, yt = 0.0, vb = 0.0, yb = 0.0;
  for (int i = 0; i < ps.size(); ++i) {
    if (ps.has_flag(i, kMomentTop)) {
      vt += ps.volumes[i];
      yt += ps.volumes[i] * ps.positions[i].y;
    }
    if (ps.has_flag(i, kMomentBottom)) {
      vb += ps.volumes[i];
      yb += ps.volumes[i] * ps.positions[i].y;
    }
  }
  if (vt <= 0.0 || vb <= 0.0)
    throw ConfigError("moment bands: both bands must be non-empty");
  return yt / vt - yb / vb;
}

}  // namespace gpd
