#include <cmath>

#include "core/errors.hpp"
#include "core/geometry.hpp"
#include "core/loads.hpp"
#include "doctest.h"

using namespace gpd;

TEST_CASE("gravity density") {
  const Vec2 b = gravity_density(897.6, 9.81);
  CHECK(b.x == 0.0);
  CHECK(b.y == doctest::Approx(-8805.456).epsilon(1e-6));
  CHECK(gravity_density(897.6, 0.0).y == 0.0);
  CHECK(gravity_density(2.0 * 897.6, 9.81).y == doctest::Approx(2.0 * b.y));
}

TEST_CASE("erosion front follows the Fig-23 timeline") {
  CHECK(erosion_front(0.0, 100.0, 1.0) == 100.0);
  const double v = 0.4 / 86400.0;  // 0.4 m/day
  CHECK(erosion_front(28.0 * 86400.0, 100.0, v) ==
        doctest::Approx(88.8).epsilon(1e-9));
  CHECK(erosion_front(37.5 * 86400.0, 100.0, v) ==
        doctest::Approx(85.0).epsilon(1e-9));
  CHECK(erosion_front(1e9, 100.0, v) == 0.0);  // clamped
}

TEST_CASE("support reaction sign and gating") {
  CHECK(support_reaction(0.0, true, 1e7).y == 0.0);
  CHECK(support_reaction(-0.5, false, 1e7).y == 0.0);
  const Vec2 r = support_reaction(-0.01, true, 1e7);
  CHECK(r.x == 0.0);
  CHECK(r.y == doctest::Approx(1e5));  // pushes back up
  // restoring: anti-parallel to the displacement
  CHECK(support_reaction(0.01, true, 1e7).y == doctest::Approx(-1e5));
}

TEST_CASE("net buoyancy line load") {
  CHECK(buoyancy_line_load(1025.0, 897.6, 9.81, 10.0) ==
        doctest::Approx(1.2498e4).epsilon(1e-4));
  CHECK(buoyancy_line_load(897.6, 897.6, 9.81, 10.0) == 0.0);
  CHECK(buoyancy_line_load(1025.0, 897.6, 9.81, 20.0) ==
        doctest::Approx(2.0 * buoyancy_line_load(1025.0, 897.6, 9.81, 10.0)));
  CHECK_THROWS_AS(buoyancy_line_load(1025.0, 897.6, 9.81, 0.0), ConfigError);
}

TEST_CASE("moment value over the wave cycle") {
  MomentLoad load;
  load.enabled = true;
  load.M0 = 3.5e9;
  load.f = 0.1;
  load.mode = MomentMode::Sinusoidal;
  CHECK(moment_value(load, 0.0) == 0.0);
  CHECK(moment_value(load, 1.0 / (4.0 * load.f)) == doctest::Approx(3.5e9));
  load.mode = MomentMode::Constant;
  CHECK(moment_value(load, 123.0) == 3.5e9);
}

TEST_CASE("moment couple: zero resultant, exact moment") {
  MaterialPointSet ps = discretize_rectangle(4.0, 1.0, 0.125, 1.0);
  for (int i = 0; i < ps.size(); ++i) {
    if (ps.positions[i].x < 4.0 - 0.5) continue;
    ps.add_flag(i, ps.positions[i].y >= 0.5 ? kMomentTop : kMomentBottom);
  }
  const double lever = band_lever_arm(ps);
  CHECK(lever == doctest::Approx(0.5));

  double vt = 0.0, vb = 0.0;
  for (int i = 0; i < ps.size(); ++i) {
    if (ps.has_flag(i, kMomentTop)) vt += ps.volumes[i];
    if (ps.has_flag(i, kMomentBottom)) vb += ps.volumes[i];
  }
  const double M = 1.7e3;
  const CoupleDensities cd = moment_couple(M, lever, vt, vb);

  Vec2 net{};
  double torque = 0.0;  // about the origin; net force is zero so any pivot works
  for (int i = 0; i < ps.size(); ++i) {
    Vec2 f{};
    if (ps.has_flag(i, kMomentTop)) f = cd.top * ps.volumes[i];
    if (ps.has_flag(i, kMomentBottom)) f = cd.bottom * ps.volumes[i];
    net += f;
    torque += ps.positions[i].x * f.y - ps.positions[i].y * f.x;
  }
  CHECK(std::abs(net.x) < 1e-10 * std::abs(M / lever));
  CHECK(std::abs(net.y) == 0.0);
  CHECK(std::abs(torque) == doctest::Approx(M).epsilon(1e-10));

  CHECK_THROWS_AS(moment_couple(M, 0.0, vt, vb), ConfigError);
  CHECK_THROWS_AS(band_lever_arm(discretize_rectangle(1.0, 1.0, 0.5, 1.0)),
                  ConfigError);
}
