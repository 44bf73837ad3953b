#pragma once
#include <cstdint>
#include <vector>

#include "core/vec2.hpp"

namespace gpd {

// Per-point set membership. Fictitious constraint layers are ordinary points
// tagged kFixed; load application rows carry their own tags.
enum PointFlag : std::uint8_t {
  kFixed = 1u << 0,
  kSupportRow = 1u << 1,
  kNoFail = 1u << 2,
  kMomentTop = 1u << 3,
  kMomentBottom = 1u << 4,
  kBaseRow = 1u << 5,
};

struct MaterialPointSet {
  std::vector<Vec2> positions;
  std::vector<double> volumes;   // cell area * thickness
  std::vector<std::uint8_t> flags;
  double dx = 0.0;
  double thickness = 1.0;

  int size() const { return static_cast<int>(positions.size()); }
  bool has_flag(int i, PointFlag f) const { return (flags[i] & f) != 0; }
  void add_flag(int i, PointFlag f) { flags[i] |= f; }
  std::vector<int> tagged(PointFlag f) const;
  double total_volume() const;
};

struct HorizonSpec {
  double delta = 0.0;    // interaction radius
  double m_ratio = 0.0;  // delta / dx

  static HorizonSpec from_dx(double dx, double m_ratio);
};

struct BondList {
  // pairs stored once with i < j, sorted lexicographically
  std::vector<std::int32_t> i;
  std::vector<std::int32_t> j;
  std::vector<Vec2> xi;                  // rest vector x_j - x_i
  std::vector<double> rest_len;
  std::vector<double> volume_factor;     // taper over [delta-dx/2, delta+dx/2]
  std::vector<double> stiffness_scale;   // surface-correction factor, 1 in bulk
  std::vector<std::uint8_t> no_fail;

  // CSR incidence: for each point, its bonds with orientation sign
  // (+1 when the point is endpoint i, -1 when endpoint j).
  std::vector<std::int32_t> inc_offset;
  std::vector<std::int32_t> inc_bond;
  std::vector<std::int8_t> inc_sign;

  double delta = 0.0;
  double dx = 0.0;

  std::size_t size() const { return i.size(); }
};

// Uniform cell-centered grid covering [0,length] x [0,height].
MaterialPointSet discretize_rectangle(double length, double height, double dx,
                                      double thickness);

// Grounded block of height t+R over [0,b], overhang of thickness t over
// [b,a], quarter-circle fillet of radius R at the transition carved so the
// remaining material in the corner square is the quarter disc centered at
// (b-R, R). Cell centers strictly inside the removed region are dropped.
MaterialPointSet discretize_scenario1(double a, double b, double t, double R,
                                      double dx, double thickness);

// Closed-form area of the scenario-1 domain.
double scenario1_area(double a, double b, double t, double R);

struct BondBuildOptions {
  bool surface_correction = false;  // volume-method stiffness normalization
};

BondList build_bonds(const MaterialPointSet& points, const HorizonSpec& horizon,
                     const BondBuildOptions& opts = {});

// Fictitious fixed layers appended outside the physical domain. `cells` rows
// or columns of width dx; the layer must be at least delta + dx/2 deep so no
// boundary point sees a truncated horizon on the constrained side.
int fixed_layer_cells(const HorizonSpec& horizon);
void append_fixed_layer_left(MaterialPointSet& ps, double y0, double y1,
                             int cells);
void append_fixed_layer_bottom(MaterialPointSet& ps, double x0, double x1,
                               int cells);

// Tag helpers. no-fail covers points within `radius` of any fixed point's
// constrained face, approximated by coordinate tests against the given
// bounding planes (x < x_plane + radius etc.; NaN disables a plane).
void tag_rows(MaterialPointSet& ps, PointFlag flag, double y_min, double y_max,
              bool physical_only = true);
void tag_no_fail_band_x(MaterialPointSet& ps, double x_lo, double x_hi);
void tag_no_fail_band_y(MaterialPointSet& ps, double y_lo, double y_hi);

}  // namespace gpd
