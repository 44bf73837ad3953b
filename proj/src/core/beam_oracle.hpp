#pragma once

namespace gpd {

// Analytic references for the two scenarios: Euler-Bernoulli cantilever under
// uniform load and the semi-infinite beam on an elastic foundation with an
// end moment (Hetenyi solution). Plane-strain effective modulus uses the
// bond-based Poisson ratio 1/4, which is what the lattice embodies.
struct BeamOracle {
  double E_eff = 0.0;  // Pa, plane-strain effective modulus
  double I = 0.0;      // m^4 per unit width
  double B = 0.0;      // N*m flexural rigidity per unit width
  double k = 0.0;      // N/m^3 foundation modulus

  static BeamOracle plane_strain(double E, double h, double k_foundation);
};

double plane_strain_modulus(double E);  // E / (1 - (1/4)^2)

// w(x) for a clamped-free beam under uniform load q, x from the clamp.
double cantilever_deflection(double q, double L, double B, double x);
double cantilever_tip_deflection(double q, double L, double B);

struct FloatingBeamOracle {
  double beta = 0.0;   // (k/(4B))^(1/4)
  double x_rm = 0.0;   // distance from the loaded end to the moat extremum
};

// Semi-infinite beam on elastic foundation, moment M0 applied at the free
// end x = 0: w(x) = -(2 M0 beta^2 / k) e^{-bx} (cos bx - sin bx). The first
// stationary point of w sits at pi/(2 beta) regardless of M0. Throws when
// the beam is shorter than 5/beta (end effects corrupt the solution).
FloatingBeamOracle floating_beam_xrm(const BeamOracle& oracle, double M0,
                                     double beam_length);

double floating_beam_deflection(const BeamOracle& oracle, double M0, double x);

}  // namespace gpd
