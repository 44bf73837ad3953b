#include "core/stress.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace gpd {

double chord_fraction(const Vec2& a, const Vec2& b, const Vec2& center,
                      double radius) {
  const Vec2 d = b - a;
  const Vec2 rel = a - center;
  const double A = d.norm2();
  if (A <= 0.0) return 0.0;
  const double B = 2.0 * rel.dot(d);
  const double C = rel.norm2() - radius * radius;
  const double disc = B * B - 4.0 * A * C;
  if (disc <= 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double lo = std::max(0.0, (-B - sq) / (2.0 * A));
  const double hi = std::min(1.0, (-B + sq) / (2.0 * A));
  return std::max(0.0, hi - lo);
}

namespace {

struct MidpointGrid {
  double cell;
  std::unordered_map<std::int64_t, std::vector<std::int32_t>> map;

  static std::int64_t key(int cx, int cy) {
    return (static_cast<std::int64_t>(cx) << 32) ^
           (static_cast<std::int64_t>(cy) & 0xffffffffll);
  }
};

MidpointGrid build_midpoint_grid(const Model& model) {
  const auto& bonds = model.bonds();
  const auto& pts = model.points();
  MidpointGrid g;
  g.cell = model.horizon();
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    const Vec2 mid =
        pts.positions[bonds.i[b]] + bonds.xi[b] * 0.5;
    const int cx = static_cast<int>(std::floor(mid.x / g.cell));
    const int cy = static_cast<int>(std::floor(mid.y / g.cell));
    g.map[MidpointGrid::key(cx, cy)].push_back(static_cast<std::int32_t>(b));
  }
  return g;
}

// Lattice measure of a fully covered horizon disc (incl. the center cell);
// reference for the partial-horizon volume correction.
double full_coverage_measure(const MaterialPointSet& pts, double delta) {
  const double dx = pts.dx;
  const int reach = static_cast<int>(std::ceil(delta / dx));
  double m = 0.0;
  for (int ox = -reach; ox <= reach; ++ox) {
    for (int oy = -reach; oy <= reach; ++oy) {
      const double r = dx * std::hypot(double(ox), double(oy));
      if (r <= delta) m += dx * dx * pts.thickness;
    }
  }
  return m;
}

Mat2 stress_at_point(int p, const Model& model, const SimulationState& st,
                     const MidpointGrid& grid, double omega, int* pairs) {
  const auto& bonds = model.bonds();
  const auto& pts = model.points();
  const double delta = model.horizon();
  const double c = model.micromodulus_value();
  const Vec2 x = pts.positions[p];
  // A segment can intersect the horizon only if its midpoint lies within
  // delta + |xi|/2 of x; with |xi| <= delta + dx/2 one grid ring suffices
  // for cell size delta... use reach 2 to cover the worst case.
  const int cx = static_cast<int>(std::floor(x.x / grid.cell));
  const int cy = static_cast<int>(std::floor(x.y / grid.cell));
  Mat2 out;
  int count = 0;
  for (int ox = -2; ox <= 2; ++ox) {
    for (int oy = -2; oy <= 2; ++oy) {
      auto it = grid.map.find(MidpointGrid::key(cx + ox, cy + oy));
      if (it == grid.map.end()) continue;
      for (std::int32_t b : it->second) {
        const Vec2 pa = pts.positions[bonds.i[b]];
        const Vec2 pb = pts.positions[bonds.j[b]];
        const double frac = chord_fraction(pa, pb, x, delta);
        if (frac <= 0.0) continue;
        const Vec2 d = bonds.xi[b] + (st.u[bonds.j[b]] - st.u[bonds.i[b]]);
        const double len = d.norm();
        if (len <= 0.0) continue;
        const double L0 = bonds.rest_len[b];
        const double s = (len - L0) / L0;
        const double fmag = c * bonds.stiffness_scale[b] * s * st.mu_eff[b] *
                            bonds.volume_factor[b];
        const Vec2 f = d * (fmag / len);
        const double w = frac * pts.volumes[bonds.i[b]] *
                         pts.volumes[bonds.j[b]] / omega;
        out += outer(f, bonds.xi[b]) * w;  // ordered pairs contribute twice
        ++count;
      }
    }
  }
  if (pairs) *pairs = count;
  return out;
}

}  // namespace

VirialStressField stress_field(const Model& model, const SimulationState& st) {
  const auto& pts = model.points();
  const auto& bonds = model.bonds();
  const int n = pts.size();
  const double delta = model.horizon();
  const double omega_bulk = M_PI * delta * delta * pts.thickness;

  const MidpointGrid grid = build_midpoint_grid(model);
  const double full_measure = full_coverage_measure(pts, delta);

  // Covered horizon measure per point (incl. own cell) for the boundary
  // reduction of omega.
  std::vector<double> covered(n, 0.0);
  for (int p = 0; p < n; ++p) covered[p] = pts.volumes[p];
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    if (bonds.rest_len[b] <= delta) {
      covered[bonds.i[b]] += pts.volumes[bonds.j[b]];
      covered[bonds.j[b]] += pts.volumes[bonds.i[b]];
    }
  }

  VirialStressField field;
  field.stress.assign(n, Mat2{});
  field.damage.assign(n, 0.0);
  field.omega.assign(n, 0.0);
  field.pairs_in_horizon.assign(n, 0);

  parallel_for(static_cast<std::size_t>(n), 1024,
               [&](std::size_t p0, std::size_t p1) {
                 for (std::size_t p = p0; p < p1; ++p) {
                   const int pi = static_cast<int>(p);
                   const double omega =
                       omega_bulk * covered[p] / full_measure;
                   field.omega[p] = omega;
                   field.stress[p] = stress_at_point(
                       pi, model, st, grid, omega, &field.pairs_in_horizon[p]);
                   field.damage[p] =
                       damage_index(pi, bonds, pts, st.mu_eff.data());
                 }
               });
  for (int p = 0; p < n; ++p)
    if (field.pairs_in_horizon[p] == 0) field.flagged.push_back(p);
  return field;
}

Mat2 virial_stress_at(int point, const Model& model,
                      const SimulationState& st) {
  const MidpointGrid grid = build_midpoint_grid(model);
  const double delta = model.horizon();
  const auto& pts = model.points();
  const double omega_bulk = M_PI * delta * delta * pts.thickness;
  double covered = pts.volumes[point];
  for (int q = 0; q < pts.size(); ++q) {
    if (q == point) continue;
    if ((pts.positions[q] - pts.positions[point]).norm() <= delta)
      covered += pts.volumes[q];
  }
  const double omega =
      omega_bulk * covered / full_coverage_measure(pts, delta);
  return stress_at_point(point, model, st, grid, omega, nullptr);
}

TensileProbe max_tensile_probe(const VirialStressField& field,
                               const MaterialPointSet& points,
                               const std::vector<int>& region) {
  if (region.empty()) throw QueryError("max_tensile_probe: empty region");
  TensileProbe probe;
  bool first = true;
  for (int p : region) {
    const double s11 = field.stress[p].xx;
    if (first || s11 > probe.sigma11 ||
        (s11 == probe.sigma11 && p < probe.point)) {
      probe.sigma11 = s11;
      probe.location = points.positions[p];
      probe.point = p;
      first = false;
    }
  }
  return probe;
}

}  // namespace gpd
