#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tempora/geroch.hpp"
#include "tempora/spacetime.hpp"

using namespace tempora;

namespace {

ModelSpec box_spec(ModelFamily fam, int nt, int nx, double t_half = 1.0, double x_half = 1.0) {
  ModelSpec s;
  s.family = fam;
  s.t_lo = -t_half;
  s.t_hi = t_half;
  s.x_lo = -x_half;
  s.x_hi = x_half;
  s.nt = nt;
  s.nx = nx;
  return s;
}

ModelSpec cylinder_spec(int nt, int nx, double circumference, double t_half = 1.0) {
  ModelSpec s;
  s.family = ModelFamily::CylinderProduct;
  s.t_lo = -t_half;
  s.t_hi = t_half;
  s.nt = nt;
  s.nx = nx;
  s.circumference = circumference;
  return s;
}

} // namespace

TEST_CASE("flat box populates every node with the flat metric") {
  const SampledSpacetime st = build_model(box_spec(ModelFamily::Minkowski2d, 11, 11));
  CHECK(st.node_count() == 121);
  CHECK(st.excluded_count() == 0);
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    CHECK(st.metric(n).tt == doctest::Approx(-1.0));
    CHECK(st.metric(n).tx == doctest::Approx(0.0));
    CHECK(st.metric(n).xx == doctest::Approx(1.0));
  }
}

TEST_CASE("constant warp scales the metric pointwise") {
  ModelSpec s = cylinder_spec(11, 10, 2.0);
  s.family = ModelFamily::ConformalWarp;
  s.warp.kind = WarpSpec::Kind::Constant;
  s.warp.base = 2.0;
  const SampledSpacetime st = build_model(s);
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    CHECK(st.metric(n).tt == doctest::Approx(-4.0));
    CHECK(st.metric(n).xx == doctest::Approx(4.0));
  }
}

TEST_CASE("carved chart removes the closed future cone of the origin") {
  const SampledSpacetime st = build_model(box_spec(ModelFamily::CarvedMinkowski, 21, 21));
  // Exhaustive count over the coordinate grid.
  int included = 0;
  for (int it = 0; it < 21; ++it)
    for (int ix = 0; ix < 21; ++ix) {
      const double t = -1.0 + it * 0.1;
      const double x = -1.0 + ix * 0.1;
      if (t < std::abs(x) - 1e-12) ++included;
    }
  CHECK(included == 320);
  CHECK(st.node_count() == 320);
  CHECK(st.excluded_count() == 121);
}

TEST_CASE("total volume approximates the continuum region area") {
  // Diamond of half-width 1 has area 2; the fractional boundary cells keep
  // the quadrature error at second order.
  const SampledSpacetime st = build_model(box_spec(ModelFamily::DiamondMinkowski, 81, 81));
  double total = 0.0;
  for (std::size_t n = 0; n < st.node_count(); ++n) total += st.volume_density(n);
  const double exact = oracle::quadrature_area(-1, 1, -1, 1, 4000, [](double t, double x) {
    return std::abs(t) + std::abs(x) < 1.0;
  });
  CHECK(exact == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(total == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(build_model(box_spec(ModelFamily::Minkowski2d, 2, 11)), InputError);
  ModelSpec s = cylinder_spec(11, 10, 2.0);
  s.family = ModelFamily::ConformalWarp;
  s.warp.kind = WarpSpec::Kind::Sinusoidal;
  s.warp.base = 0.5;
  s.warp.amplitude = 1.0; // dips negative
  CHECK_THROWS_AS(build_model(s), ConstructionError);
}

TEST_CASE("constant-level and tilted surfaces") {
  const SampledSpacetime cyl = build_model(cylinder_spec(41, 40, 2.0));
  const SurfaceGraph flat = surface_between(cyl, 0.0);
  for (double u : flat.u) CHECK(u == 0.0);
  CHECK_THROWS_AS((void)surface_between(cyl, 1.5), RangeError);

  // Tilted sine surface: spacelike iff the max slope stays under the cone.
  const double L = 2.0;
  std::vector<double> u(40);
  for (int ix = 0; ix < 40; ++ix) u[ix] = 0.1 * std::sin(2.0 * M_PI * cyl.chart().x_coord(ix) / L);
  // max |u'| = 0.1 * 2pi/L = 0.314 < 1 - margin
  CHECK_NOTHROW((void)make_surface(cyl, u));

  for (int ix = 0; ix < 40; ++ix) u[ix] = 0.5 * std::sin(2.0 * M_PI * cyl.chart().x_coord(ix) / L);
  // max |u'| = 1.57 > 1: not spacelike
  CHECK_THROWS_AS((void)make_surface(cyl, u), InputError);
}

TEST_CASE("rotation groups on the cylinder") {
  const SampledSpacetime cyl = build_model(cylinder_spec(21, 40, 2.0));
  GroupSpec gs;
  gs.rotation_order = 4;
  const GroupAction g = build_group(cyl, gs);
  CHECK(g.size() == 4);
  CHECK(g.is_isometric());
  CHECK(g.preserves_time_orientation());
  CHECK(g.pullback_residual() == doctest::Approx(0.0));

  gs.rotation_order = 1;
  CHECK(build_group(cyl, gs).size() == 1);

  gs.rotation_order = 7; // 40 not divisible by 7
  CHECK_THROWS_AS((void)build_group(cyl, gs), ConfigError);

  const SampledSpacetime box = build_model(box_spec(ModelFamily::Minkowski2d, 11, 11));
  gs.rotation_order = 2;
  CHECK_THROWS_AS((void)build_group(box, gs), ConfigError);
}

TEST_CASE("warped rotations are conformal, not isometric") {
  ModelSpec s = cylinder_spec(21, 40, 2.0);
  s.family = ModelFamily::ConformalWarp;
  s.warp.kind = WarpSpec::Kind::Sinusoidal;
  s.warp.base = 1.0;
  s.warp.amplitude = 0.3;
  s.warp.mode = 1;
  const SampledSpacetime st = build_model(s);
  GroupSpec gs;
  gs.rotation_order = 2;
  const GroupAction g = build_group(st, gs);
  CHECK(g.size() == 2);
  CHECK_FALSE(g.is_isometric());
  CHECK(g.pullback_residual() <= 1e-9);
  // Direct pullback recomputation at a few nodes.
  const GroupElement& rot = g.elements()[1];
  for (std::size_t n : {std::size_t{0}, std::size_t{77}, std::size_t{511}}) {
    const auto m = static_cast<std::size_t>(rot.map[n]);
    CHECK(st.metric(m).tt == doctest::Approx(rot.conf2[n] * st.metric(n).tt));
    CHECK(st.metric(m).xx == doctest::Approx(rot.conf2[n] * st.metric(n).xx));
  }
}

TEST_CASE("dihedral group table closes") {
  const SampledSpacetime cyl = build_model(cylinder_spec(21, 40, 2.0));
  GroupSpec gs;
  gs.rotation_order = 4;
  gs.reflection = true;
  const GroupAction g = build_group(cyl, gs);
  CHECK(g.size() == 8);
  // Every element map must be a bijection.
  for (const GroupElement& e : g.elements()) {
    std::vector<int> seen(cyl.node_count(), 0);
    for (const std::int32_t m : e.map) ++seen[static_cast<std::size_t>(m)];
    for (const int c : seen) CHECK(c == 1);
  }
}

TEST_CASE("isometric averaging fixes the volume density") {
  const SampledSpacetime cyl = build_model(cylinder_spec(21, 40, 2.0));
  GroupSpec gs;
  gs.rotation_order = 4;
  const GroupAction g = build_group(cyl, gs);
  const VolumeMeasure mu = VolumeMeasure::from_spacetime(cyl);
  // Uniform product chart: the measure is already invariant.
  for (const GroupElement& e : g.elements())
    for (std::size_t n = 0; n < cyl.node_count(); ++n)
      CHECK(std::abs(mu.weights[static_cast<std::size_t>(e.map[n])] - mu.weights[n]) <= 1e-12);
}
