#include "core/beam_oracle.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace gpd {

double plane_strain_modulus(double E) {
  const double nu = 0.25;
  return E / (1.0 - nu * nu);
}

BeamOracle BeamOracle::plane_strain(double E, double h, double k_foundation) {
  BeamOracle o;
  o.E_eff = plane_strain_modulus(E);
  o.I = h * h * h / 12.0;
  o.B = o.E_eff * o.I;
  o.k = k_foundation;
  return o;
}

double cantilever_deflection(double q, double L, double B, double x) {
  if (B <= 0.0) throw ConfigError("cantilever oracle: B must be positive");
  return q * x * x * (6.0 * L * L - 4.0 * L * x + x * x) / (24.0 * B);
}

double cantilever_tip_deflection(double q, double L, double B) {
  if (B <= 0.0) throw ConfigError("cantilever oracle: B must be positive");
  return q * L * L * L * L / (8.0 * B);
}

FloatingBeamOracle floating_beam_xrm(const BeamOracle& oracle, double M0,
                                     double beam_length) {
  if (oracle.B <= 0.0 || oracle.k <= 0.0)
    throw ConfigError("floating beam oracle: B and k must be positive");
  FloatingBeamOracle out;
  out.beta = std::pow(oracle.k / (4.0 * oracle.B), 0.25);
  if (beam_length < 5.0 / out.beta)
    throw ConfigError("floating beam oracle invalid: length " +
                      std::to_string(beam_length) + " below semi-infinite " +
                      "regime 5/beta = " + std::to_string(5.0 / out.beta));
  (void)M0;  // the extremum location does not depend on the moment amplitude
  out.x_rm = M_PI / (2.0 * out.beta);
  return out;
}

double floating_beam_deflection(const BeamOracle& oracle, double M0, double x) {
  const double beta = std::pow(oracle.k / (4.0 * oracle.B), 0.25);
  const double bx = beta * x;
  return -(2.0 * M0 * beta * beta / oracle.k) * std::exp(-bx) *
         (std::cos(bx) - std::sin(bx));
}

}  // namespace gpd
