#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tempora/geroch.hpp"

using namespace tempora;

namespace {

SampledSpacetime diamond(int n) {
  ModelSpec s;
  s.family = ModelFamily::DiamondMinkowski;
  s.t_lo = -1;
  s.t_hi = 1;
  s.x_lo = -1;
  s.x_hi = 1;
  s.nt = n;
  s.nx = n;
  return build_model(s);
}

SampledSpacetime minkowski(int n, double half = 1.0) {
  ModelSpec s;
  s.family = ModelFamily::Minkowski2d;
  s.t_lo = -half;
  s.t_hi = half;
  s.x_lo = -half;
  s.x_hi = half;
  s.nt = n;
  s.nx = n;
  return build_model(s);
}

} // namespace

TEST_CASE("cone-volume pair on the diamond") {
  const SampledSpacetime st = diamond(61);
  const CausalGraph g(st, 2);
  const VolumeMeasure mu = VolumeMeasure::from_spacetime(st);
  const GerochPair pair = geroch_pm(g, mu);

  const std::size_t center = static_cast<std::size_t>(st.node_at(30, 30));

  // Time-reflection symmetry at the center.
  CHECK(pair.t_minus[center] == doctest::Approx(-pair.t_plus[center]).epsilon(1e-12));

  // Past-cone measure of the center: quadrature over the carved triangle,
  // normalized by the diamond area.
  const double tri = oracle::quadrature_area(-1, 1, -1, 1, 3000, [](double t, double x) {
    return std::abs(t) + std::abs(x) < 1.0 && t <= -std::abs(x);
  });
  const double total = oracle::quadrature_area(-1, 1, -1, 1, 3000, [](double t, double x) {
    return std::abs(t) + std::abs(x) < 1.0;
  });
  CHECK(tri / total == doctest::Approx(0.25).epsilon(2e-3));
  CHECK(pair.t_minus[center] == doctest::Approx(tri / total).epsilon(0.04));

  // Signs everywhere.
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    CHECK(pair.t_minus[n] > 0.0);
    CHECK(pair.t_plus[n] < 0.0);
  }

  // Strict growth along every causal edge, both fields.
  CHECK(verify_time_function(g, pair.t_minus).violations == 0);
  ScalarField neg_plus(st.node_count());
  for (std::size_t n = 0; n < st.node_count(); ++n) neg_plus[n] = pair.t_plus[n];
  CHECK(verify_time_function(g, neg_plus).violations == 0);
}

TEST_CASE("ln combination on the diamond") {
  const SampledSpacetime st = diamond(61);
  const CausalGraph g(st, 2);
  const GerochPair pair = geroch_pm(g, VolumeMeasure::from_spacetime(st));
  const ScalarField t = geroch_cauchy(pair.t_minus, pair.t_plus);

  const std::size_t center = static_cast<std::size_t>(st.node_at(30, 30));
  CHECK(std::abs(t[center]) <= 1e-12);

  // Closed-form value along the axis: ln((1+t0)^2 / (1-t0)^2).
  const std::size_t probe = static_cast<std::size_t>(st.node_at(45, 30)); // t0 = 0.5
  const double exact = 2.0 * std::log((1.0 + 0.5) / (1.0 - 0.5));
  CHECK(t[probe] == doctest::Approx(exact).epsilon(0.08));

  // Growth toward the tip under refinement.
  const SampledSpacetime fine = diamond(121);
  const CausalGraph gf(fine, 2);
  const ScalarField tf = geroch_cauchy(geroch_pm(gf, VolumeMeasure::from_spacetime(fine)).t_minus,
                                       geroch_pm(gf, VolumeMeasure::from_spacetime(fine)).t_plus);
  const double coarse_tip = t[static_cast<std::size_t>(st.node_at(59, 30))];
  const double fine_tip = tf[static_cast<std::size_t>(fine.node_at(119, 60))];
  CHECK(fine_tip > coarse_tip);

  // Antisymmetry under time reflection.
  for (int it = 0; it < 61; ++it)
    for (int ix = 0; ix < 61; ++ix) {
      const std::int32_t a = st.node_at(it, ix);
      const std::int32_t b = st.node_at(60 - it, ix);
      if (a < 0 || b < 0) continue;
      CHECK(std::abs(t[static_cast<std::size_t>(a)] + t[static_cast<std::size_t>(b)]) <= 1e-9);
    }

  CHECK(verify_time_function(g, t).violations == 0);
}

TEST_CASE("coordinate time verifies on the cylinder; constants fail everywhere") {
  ModelSpec s;
  s.family = ModelFamily::CylinderProduct;
  s.t_lo = -1;
  s.t_hi = 1;
  s.nt = 21;
  s.nx = 20;
  s.circumference = 2.0;
  const SampledSpacetime st = build_model(s);
  const CausalGraph g(st, 2);
  const ScalarField coord = field_from(st, [](double t, double) { return t; });
  CHECK(verify_time_function(g, coord).violations == 0);
  const ScalarField constant(st.node_count(), 1.0);
  CHECK(verify_time_function(g, constant).violations == g.edge_count());
}

TEST_CASE("chain spans on the full chart") {
  const SampledSpacetime st = minkowski(41);
  const CausalGraph g(st, 2);
  const GerochPair pair = geroch_pm(g, VolumeMeasure::from_spacetime(st));
  const ScalarField t = geroch_cauchy(pair.t_minus, pair.t_plus);

  std::vector<std::int32_t> seeds;
  for (std::size_t n = 0; n < st.node_count(); n += 7) seeds.push_back(static_cast<std::int32_t>(n));
  // Threshold matched to the chart extent: half the log-dynamic-range.
  const double threshold = 0.5 * std::log(static_cast<double>(st.node_count()) / 16.0);
  const ChainRangeReport rep = verify_cauchy(g, t, threshold, seeds);
  CHECK(rep.failures == 0);

  const ChainRangeReport flat = verify_cauchy(g, ScalarField(st.node_count(), 0.5), threshold, seeds);
  CHECK(flat.failures == rep.chains);
}

TEST_CASE("carved chart: boundary chains trap the forward volume differently") {
  ModelSpec s;
  s.family = ModelFamily::CarvedMinkowski;
  s.t_lo = -1;
  s.t_hi = 1;
  s.x_lo = -1;
  s.x_hi = 1;
  s.nt = 101;
  s.nx = 101;
  const SampledSpacetime st = build_model(s);
  const CausalGraph g(st, 2);
  const GerochPair pair = geroch_pm(g, VolumeMeasure::from_spacetime(st));

  // Columns at x = 0 and x = 0.5 run into the carve. The forward volume
  // |t_plus| stays bounded along both chains but its limit differs by a
  // fixed fraction of the total measure, so no reparametrization of t_plus
  // can be unbounded along both.
  const int ix_a = 50; // x = 0
  const int ix_b = 75; // x = 0.5
  const double lim_a = std::abs(column_chain_extrema(g, pair.t_plus, ix_a).min_value);
  const double lim_b = std::abs(column_chain_extrema(g, pair.t_plus, ix_b).min_value);
  CHECK(std::abs(lim_a - lim_b) > 0.05);

  // Analytic values: the forward volumes of the two chains' past endpoints.
  auto forward_volume = [&](double a) {
    return oracle::quadrature_area(-1, 1, -1, 1, 2000, [a](double t, double x) {
      return t < std::abs(x) && t >= -1.0 + std::abs(x - a);
    });
  };
  const double carved_total = 3.0;
  CHECK((forward_volume(0.0) - forward_volume(0.5)) / carved_total == doctest::Approx(1.0 / 12.0).epsilon(2e-2));
  CHECK(std::abs(lim_a - lim_b) ==
        doctest::Approx((forward_volume(0.0) - forward_volume(0.5)) / carved_total).epsilon(0.12));
}

TEST_CASE("steepness margin of simple fields") {
  const SampledSpacetime st = minkowski(21);
  const ScalarField coord_t = field_from(st, [](double t, double) { return t; });
  const ScalarField coord_2t = field_from(st, [](double t, double) { return 2.0 * t; });
  const ScalarField coord_x = field_from(st, [](double, double x) { return x; });
  const ScalarField mt = steepness_margin(st, coord_t);
  const ScalarField m2t = steepness_margin(st, coord_2t);
  const ScalarField mx = steepness_margin(st, coord_x);
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    CHECK(mt[n] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m2t[n] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(mx[n] == doctest::Approx(-1.0).epsilon(1e-9));
  }
}

TEST_CASE("refinement shrinks the largest edge jump of the cone volumes") {
  double prev = std::numeric_limits<double>::infinity();
  for (const int n : {21, 41, 81}) {
    const SampledSpacetime st = minkowski(n);
    const CausalGraph g(st, 2);
    const GerochPair pair = geroch_pm(g, VolumeMeasure::from_spacetime(st));
    double jump = 0.0;
    for (std::size_t p = 0; p < g.node_count(); ++p) {
      const auto [e0, e1] = g.out_range(p);
      for (std::size_t e = e0; e < e1; ++e) {
        const auto q = static_cast<std::size_t>(g.edge_to(e));
        jump = std::max(jump, pair.t_minus[q] - pair.t_minus[p]);
        jump = std::max(jump, pair.t_plus[q] - pair.t_plus[p]);
      }
    }
    CHECK(jump < prev);
    prev = jump;
  }
}

TEST_CASE("measure damping and normalization") {
  const SampledSpacetime st = minkowski(21);
  const VolumeMeasure plain = VolumeMeasure::from_spacetime(st);
  const VolumeMeasure damped = VolumeMeasure::from_spacetime(st, 0.5);
  CHECK(plain.total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(damped.total() == doctest::Approx(1.0).epsilon(1e-12));
  // Damping shifts weight toward the middle rows.
  const std::size_t mid = static_cast<std::size_t>(st.node_at(10, 10));
  const std::size_t top = static_cast<std::size_t>(st.node_at(20, 10));
  CHECK(damped.weights[mid] / plain.weights[mid] > damped.weights[top] / plain.weights[top]);
}

TEST_CASE("level sets and foliation export") {
  const SampledSpacetime st = minkowski(41);
  const CausalGraph g(st, 2);
  const ScalarField coord = field_from(st, [](double t, double) { return t; });

  const Foliation fol = foliation_export(g, coord, {0.0, 0.33});
  REQUIRE(fol.levels.size() == 2);
  for (int ix = 0; ix < 41; ++ix) {
    CHECK(fol.levels[0].t_cross[ix] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fol.levels[1].t_cross[ix] == doctest::Approx(0.33).epsilon(1e-12));
  }
  // Acausality of each exported level band.
  for (const LevelSet& ls : fol.levels) CHECK(level_band_causal_edges(g, ls) == 0);

  // Symmetric zero level of the cone-volume combination on the diamond.
  const SampledSpacetime dia = diamond(41);
  const CausalGraph gd(dia, 2);
  const GerochPair pair = geroch_pm(gd, VolumeMeasure::from_spacetime(dia));
  const ScalarField t = geroch_cauchy(pair.t_minus, pair.t_plus);
  const LevelSet zero = extract_level_set(dia, t, 0.0);
  for (int ix = 0; ix < 41; ++ix) {
    if (std::isnan(zero.t_cross[ix])) continue;
    CHECK(std::abs(zero.t_cross[ix]) <= 1e-9);
  }

  CHECK_THROWS_AS((void)foliation_export(g, coord, {7.0}), RangeError);
  const ScalarField constant(st.node_count(), 0.0);
  CHECK_THROWS_AS((void)foliation_export(g, constant, {0.0}), InputError);
}
