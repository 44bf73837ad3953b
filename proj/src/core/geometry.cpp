#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "core/errors.hpp"

namespace gpd {

std::vector<int> MaterialPointSet::tagged(PointFlag f) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (has_flag(i, f)) out.push_back(i);
  }
  return out;
}

double MaterialPointSet::total_volume() const {
  double v = 0.0;
  for (double vi : volumes) v += vi;
  return v;
}

HorizonSpec HorizonSpec::from_dx(double dx, double m_ratio) {
  if (dx <= 0.0) throw GeometryError("horizon: dx must be positive");
  if (m_ratio < 1.5) throw GeometryError("horizon: m_ratio must be >= 1.5");
  return {m_ratio * dx, m_ratio};
}

MaterialPointSet discretize_rectangle(double length, double height, double dx,
                                      double thickness) {
  if (dx <= 0.0 || length <= 0.0 || height <= 0.0 || thickness <= 0.0)
    throw GeometryError("discretize_rectangle: non-positive dimension");
  if (length < 2.0 * dx || height < 2.0 * dx)
    throw GeometryError("discretize_rectangle: domain smaller than 2*dx");

  const int nx = static_cast<int>(std::lround(length / dx));
  const int ny = static_cast<int>(std::lround(height / dx));
  MaterialPointSet ps;
  ps.dx = dx;
  ps.thickness = thickness;
  ps.positions.reserve(static_cast<std::size_t>(nx) * ny);
  const double vol = dx * dx * thickness;
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      ps.positions.push_back({(ix + 0.5) * dx, (iy + 0.5) * dx});
      ps.volumes.push_back(vol);
    }
  }
  ps.flags.assign(ps.positions.size(), 0);
  return ps;
}

double scenario1_area(double a, double b, double t, double R) {
  return a * t + b * R - (R * R - M_PI * R * R / 4.0);
}

MaterialPointSet discretize_scenario1(double a, double b, double t, double R,
                                      double dx, double thickness) {
  if (dx <= 0.0 || thickness <= 0.0)
    throw GeometryError("scenario1 geometry: non-positive dx or thickness");
  if (!(a > b) || !(b > 0.0))
    throw GeometryError("scenario1 geometry: requires a > b > 0");
  if (!(R > 0.0) || R > t)
    throw GeometryError("scenario1 geometry: requires 0 < R <= t");

  const double h = t + R;
  const int nx = static_cast<int>(std::lround(a / dx));
  const int ny = static_cast<int>(std::lround(h / dx));
  MaterialPointSet ps;
  ps.dx = dx;
  ps.thickness = thickness;
  const double vol = dx * dx * thickness;
  // Fillet: material kept in the corner square [b-R,b]x[0,R] is the quarter
  // disc around (b-R, R); everything else in that square is eroded away.
  const double cx = b - R;
  const double cy = R;
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      const double x = (ix + 0.5) * dx;
      const double y = (iy + 0.5) * dx;
      if (x > b && y < R) continue;  // open water under the overhang
      if (x > cx && x <= b && y < R) {
        const double dxr = x - cx;
        const double dyr = y - cy;
        if (dxr * dxr + dyr * dyr > R * R) continue;
      }
      ps.positions.push_back({x, y});
      ps.volumes.push_back(vol);
    }
  }
  ps.flags.assign(ps.positions.size(), 0);
  return ps;
}

namespace {

struct CellGrid {
  double cell;
  std::unordered_map<std::int64_t, std::vector<int>> map;

  static std::int64_t key(int cx, int cy) {
    return (static_cast<std::int64_t>(cx) << 32) ^
           (static_cast<std::int64_t>(cy) & 0xffffffffll);
  }

  explicit CellGrid(const MaterialPointSet& ps, double cell_size)
      : cell(cell_size) {
    for (int i = 0; i < ps.size(); ++i) {
      const int cx = static_cast<int>(std::floor(ps.positions[i].x / cell));
      const int cy = static_cast<int>(std::floor(ps.positions[i].y / cell));
      map[key(cx, cy)].push_back(i);
    }
  }

  template <class Fn>
  void for_neighbors(const Vec2& p, Fn&& fn) const {
    const int cx = static_cast<int>(std::floor(p.x / cell));
    const int cy = static_cast<int>(std::floor(p.y / cell));
    for (int ox = -1; ox <= 1; ++ox) {
      for (int oy = -1; oy <= 1; ++oy) {
        auto it = map.find(key(cx + ox, cy + oy));
        if (it == map.end()) continue;
        for (int idx : it->second) fn(idx);
      }
    }
  }
};

}  // namespace

BondList build_bonds(const MaterialPointSet& points, const HorizonSpec& horizon,
                     const BondBuildOptions& opts) {
  const double dx = points.dx;
  if (horizon.delta < 1.5 * dx)
    throw GeometryError("build_bonds: horizon must be at least 1.5*dx");

  BondList bonds;
  bonds.delta = horizon.delta;
  bonds.dx = dx;
  const int n = points.size();
  if (n == 0) {
    bonds.inc_offset.assign(1, 0);
    return bonds;
  }

  const double cut = horizon.delta + 0.5 * dx;
  CellGrid grid(points, cut);

  // Serial build in index order keeps the list canonical; neighbor candidates
  // from the cell grid are sorted per point before storing.
  std::vector<int> cand;
  for (int i = 0; i < n; ++i) {
    cand.clear();
    grid.for_neighbors(points.positions[i], [&](int j) {
      if (j > i) cand.push_back(j);
    });
    std::sort(cand.begin(), cand.end());
    for (int j : cand) {
      const Vec2 d = points.positions[j] - points.positions[i];
      const double r = d.norm();
      if (r <= 0.0 || r >= cut) continue;  // zero taper weight is not stored
      bonds.i.push_back(i);
      bonds.j.push_back(j);
      bonds.xi.push_back(d);
      bonds.rest_len.push_back(r);
      bonds.volume_factor.push_back(std::min(1.0, (cut - r) / dx));
      bonds.no_fail.push_back(
          (points.has_flag(i, kNoFail) && points.has_flag(j, kNoFail)) ? 1 : 0);
    }
  }

  const std::size_t nb = bonds.size();
  bonds.stiffness_scale.assign(nb, 1.0);
  if (opts.surface_correction) {
    // Volume method: normalize by covered horizon measure. Reference is the
    // full-coverage measure of an interior point of an unbounded lattice.
    std::vector<double> cover(n, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
      cover[bonds.i[b]] += bonds.volume_factor[b] * points.volumes[bonds.j[b]];
      cover[bonds.j[b]] += bonds.volume_factor[b] * points.volumes[bonds.i[b]];
    }
    double ref = 0.0;
    const int reach = static_cast<int>(std::ceil(cut / dx));
    for (int ox = -reach; ox <= reach; ++ox) {
      for (int oy = -reach; oy <= reach; ++oy) {
        if (ox == 0 && oy == 0) continue;
        const double r = dx * std::sqrt(double(ox) * ox + double(oy) * oy);
        if (r >= cut) continue;
        ref += std::min(1.0, (cut - r) / dx) * dx * dx * points.thickness;
      }
    }
    for (std::size_t b = 0; b < nb; ++b) {
      const double m2 = cover[bonds.i[b]] + cover[bonds.j[b]];
      bonds.stiffness_scale[b] = m2 > 0.0 ? 2.0 * ref / m2 : 1.0;
    }
  }

  // CSR incidence in canonical order.
  bonds.inc_offset.assign(n + 1, 0);
  for (std::size_t b = 0; b < nb; ++b) {
    ++bonds.inc_offset[bonds.i[b] + 1];
    ++bonds.inc_offset[bonds.j[b] + 1];
  }
  for (int p = 0; p < n; ++p) bonds.inc_offset[p + 1] += bonds.inc_offset[p];
  bonds.inc_bond.resize(2 * nb);
  bonds.inc_sign.resize(2 * nb);
  std::vector<std::int32_t> cursor(bonds.inc_offset.begin(),
                                   bonds.inc_offset.end() - 1);
  for (std::size_t b = 0; b < nb; ++b) {
    const int pi = bonds.i[b];
    const int pj = bonds.j[b];
    bonds.inc_bond[cursor[pi]] = static_cast<std::int32_t>(b);
    bonds.inc_sign[cursor[pi]++] = +1;
    bonds.inc_bond[cursor[pj]] = static_cast<std::int32_t>(b);
    bonds.inc_sign[cursor[pj]++] = -1;
  }
  return bonds;
}

int fixed_layer_cells(const HorizonSpec& horizon) {
  return static_cast<int>(std::ceil(horizon.m_ratio + 0.5 - 1e-12));
}

void append_fixed_layer_left(MaterialPointSet& ps, double y0, double y1,
                             int cells) {
  const double dx = ps.dx;
  const double vol = dx * dx * ps.thickness;
  const int ny = static_cast<int>(std::lround((y1 - y0) / dx));
  for (int c = 1; c <= cells; ++c) {
    for (int iy = 0; iy < ny; ++iy) {
      ps.positions.push_back({-(c - 0.5) * dx, y0 + (iy + 0.5) * dx});
      ps.volumes.push_back(vol);
      ps.flags.push_back(kFixed | kNoFail);
    }
  }
}

void append_fixed_layer_bottom(MaterialPointSet& ps, double x0, double x1,
                               int cells) {
  const double dx = ps.dx;
  const double vol = dx * dx * ps.thickness;
  const int nx = static_cast<int>(std::lround((x1 - x0) / dx));
  for (int c = 1; c <= cells; ++c) {
    for (int ix = 0; ix < nx; ++ix) {
      ps.positions.push_back({x0 + (ix + 0.5) * dx, -(c - 0.5) * dx});
      ps.volumes.push_back(vol);
      ps.flags.push_back(kFixed | kNoFail);
    }
  }
}

void tag_rows(MaterialPointSet& ps, PointFlag flag, double y_min, double y_max,
              bool physical_only) {
  for (int i = 0; i < ps.size(); ++i) {
    if (physical_only && ps.has_flag(i, kFixed)) continue;
    const double y = ps.positions[i].y;
    if (y >= y_min && y <= y_max) ps.add_flag(i, flag);
  }
}

void tag_no_fail_band_x(MaterialPointSet& ps, double x_lo, double x_hi) {
  for (int i = 0; i < ps.size(); ++i) {
    const double x = ps.positions[i].x;
    if (x >= x_lo && x <= x_hi) ps.add_flag(i, kNoFail);
  }
}

void tag_no_fail_band_y(MaterialPointSet& ps, double y_lo, double y_hi) {
  for (int i = 0; i < ps.size(); ++i) {
    const double y = ps.positions[i].y;
    if (y >= y_lo && y <= y_hi) ps.add_flag(i, kNoFail);
  }
}

}  // namespace gpd
