#pragma once
#include <vector>

#include "core/solver.hpp"
#include "core/vec2.hpp"

namespace gpd {

// Static first Piola-Kirchhoff virial stress field. Per bond the weight is
// the exact radial-step bond function: the fraction of the reference bond
// segment lying inside the evaluation horizon, over the horizon volume. The
// collapsed both-endpoints-inside shortcut understates bulk stress by ~25%
// at m ~ 3 and breaks the divergence identity, so the chord fraction is used.
struct VirialStressField {
  std::vector<Mat2> stress;        // Pa
  std::vector<double> damage;      // phi in [0,1]
  std::vector<double> omega;       // normalization volume per point
  std::vector<int> pairs_in_horizon;
  std::vector<int> flagged;        // points with an empty horizon
};

// Fraction of segment a + t*(b-a), t in [0,1], inside circle(center, radius).
double chord_fraction(const Vec2& a, const Vec2& b, const Vec2& center,
                      double radius);

VirialStressField stress_field(const Model& model, const SimulationState& st);

// Single-point evaluation (op surface; the field call amortizes the search
// structure and is preferred in loops).
Mat2 virial_stress_at(int point, const Model& model, const SimulationState& st);

struct TensileProbe {
  double sigma11 = 0.0;
  Vec2 location;
  int point = -1;
};

// Arg-max of R11 over the region; ties break toward the lowest point index.
TensileProbe max_tensile_probe(const VirialStressField& field,
                               const MaterialPointSet& points,
                               const std::vector<int>& region);

}  // namespace gpd
