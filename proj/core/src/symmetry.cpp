#include "tempora/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "tempora/errors.hpp"
#include "tempora/util.hpp"

namespace tempora {

VolumeMeasure average_measure(const VolumeMeasure& mu, const GroupAction& group) {
  const std::size_t n = mu.weights.size();
  VolumeMeasure out;
  out.weights.assign(n, 0.0);
  const double inv = 1.0 / static_cast<double>(group.size());
  for (std::size_t x = 0; x < n; ++x) {
    KahanSum s;
    for (const GroupElement& e : group.elements()) s.add(mu.weights[static_cast<std::size_t>(e.map[x])]);
    out.weights[x] = s.value() * inv;
  }
  out.normalize();
  return out;
}

ScalarField average_field(const ScalarField& f, const GroupAction& group) {
  const std::size_t n = f.size();
  ScalarField out(n);
  const double inv = 1.0 / static_cast<double>(group.size());
  for (std::size_t x = 0; x < n; ++x) {
    KahanSum s;
    for (const GroupElement& e : group.elements()) s.add(f[static_cast<std::size_t>(e.map[x])]);
    out[x] = s.value() * inv;
  }
  return out;
}

double invariance_deviation(const ScalarField& f, const GroupAction& group) {
  double dev = 0.0;
  for (const GroupElement& e : group.elements())
    for (std::size_t x = 0; x < f.size(); ++x)
      dev = std::max(dev, std::abs(f[static_cast<std::size_t>(e.map[x])] - f[x]));
  return dev;
}

OrbitReport check_orbit_acausal(const CausalGraph& graph, const GroupAction& group) {
  OrbitReport rep;
  const BitMatrix& jp = graph.jplus();
  const BitMatrix& jm = graph.jminus();
  for (std::size_t ei = 1; ei < group.size(); ++ei) {
    const GroupElement& e = group.elements()[ei];
    for (std::size_t x = 0; x < graph.node_count(); ++x) {
      const auto y = static_cast<std::size_t>(e.map[x]);
      if (y == x) continue;
      ++rep.checked;
      if (jp.test(x, y) || jm.test(x, y)) {
        if (rep.violations == 0) {
          rep.first_node = static_cast<std::int32_t>(x);
          rep.first_element = ei;
        }
        ++rep.violations;
      }
    }
  }
  return rep;
}

std::size_t cone_equivariance_violations(const CausalGraph& graph, const GroupAction& group) {
  const std::size_t n = graph.node_count();
  const BitMatrix* families[4] = {&graph.jplus(), &graph.jminus(), &graph.iplus(), &graph.iminus()};
  std::size_t bad = 0;
  std::vector<std::uint64_t> image((n + 63) / 64);
  for (const GroupElement& e : group.elements()) {
    for (const BitMatrix* fam : families) {
      for (std::size_t p = 0; p < n; ++p) {
        std::memset(image.data(), 0, image.size() * 8);
        fam->for_each_in_row(p, [&](std::size_t q) {
          const auto gq = static_cast<std::size_t>(e.map[q]);
          image[gq >> 6] |= (std::uint64_t{1} << (gq & 63));
        });
        const std::uint64_t* want = fam->row(static_cast<std::size_t>(e.map[p]));
        if (std::memcmp(image.data(), want, image.size() * 8) != 0) ++bad;
      }
    }
  }
  return bad;
}

namespace {

// Monotone C^2 ramp that is exactly 0 at and below `lo` and exactly x at and
// above `b`; used to activate the next glued stage.
double glue_psi(double x, double lo, double b) { return splice_ramp(x, lo, b); }

} // namespace

InvariantResult invariant_temporal(const CausalGraph& graph, const GroupAction& group, const InvariantSpec& spec) {
  const SampledSpacetime& st = graph.spacetime();
  const std::size_t n = graph.node_count();
  const std::size_t m = spec.surfaces.size();

  if (spec.values.size() != m) throw InputError("invariant pipeline: one value per surface is required");
  for (std::size_t i = 1; i < m; ++i)
    if (!(spec.values[i] > spec.values[i - 1])) throw InputError("surface values must be strictly increasing");
  if (spec.steep && !group.is_isometric())
    throw InputError("steepness requires a group of isometries; this group is merely conformal");
  if (spec.steep && m > 1) throw InputError("steepness is only available when adapting to at most one surface");

  // Surface invariance under every element (exact grid symmetries).
  for (std::size_t i = 0; i < m; ++i) {
    const SurfaceGraph& s = spec.surfaces[i];
    for (const GroupElement& e : group.elements()) {
      for (std::size_t x = 0; x < n; ++x) {
        const int ix = st.node_ix(x);
        const int gx = st.node_ix(static_cast<std::size_t>(e.map[x]));
        if (std::abs(s.u[ix] - s.u[gx]) > 1e-12)
          throw InputError("surface " + std::to_string(i + 1) + " is not invariant under element " + e.name);
      }
    }
  }
  // Surface ordering: each surface chronologically above its predecessor.
  auto check_above = [&](const SurfaceGraph& below, const SurfaceGraph& above, const std::string& what) {
    for (int ix = 0; ix < st.chart().nx; ++ix)
      if (!(above.u[ix] > below.u[ix])) throw InputError("surface ordering violated: " + what);
  };
  if (m > 0) {
    check_above(spec.s_minus, spec.surfaces.front(), "s_minus < S_1");
    for (std::size_t i = 1; i < m; ++i) check_above(spec.surfaces[i - 1], spec.surfaces[i], "S_i < S_{i+1}");
    check_above(spec.surfaces.back(), spec.s_plus, "S_m < s_plus");
  } else {
    check_above(spec.s_minus, spec.s_plus, "s_minus < s_plus");
  }

  InvariantResult res;

  // Invariant reference: averaged measure, cone-volume pair, ln combination.
  const VolumeMeasure mu = average_measure(VolumeMeasure::from_spacetime(st, spec.measure_damping), group);
  const GerochPair pair = geroch_pm(graph, mu, spec.adapted.steep.threads);
  res.reference = geroch_cauchy(pair.t_minus, pair.t_plus);
  res.reference_bands = build_banded_time(graph, res.reference, spec.adapted.steep.band_rows);
  res.tol_h = default_tol_h(st, spec.adapted.steep);

  ScalarField stage;
  if (m == 0) {
    // No adaptation requested: the bounded pair carries the surface bounds,
    // and the two sides' cone terms have disjoint supports, so they combine
    // into a single field.
    BoundedPair bp = steep_bounded(graph, spec.s_plus, spec.s_minus, spec.f_plus, spec.f_minus, res.reference,
                                   spec.adapted.steep);
    stage = ScalarField(n);
    for (std::size_t q = 0; q < n; ++q) stage[q] = bp.t2_plus[q] + bp.t2_minus[q] - bp.base[q];
    res.trace = std::move(bp.trace);
    res.interior = std::move(bp.interior);
  } else {
    AdaptedResult ar = adapted_temporal(graph, spec.surfaces[0], spec.s_minus, spec.s_plus, spec.f_minus,
                                        spec.f_plus, res.reference, spec.adapted);
    stage = std::move(ar.field);
    res.trace = std::move(ar.trace);
    res.interior = std::move(ar.interior);
    for (double& v : stage.values) v += spec.values[0];

    for (std::size_t i = 1; i < m; ++i) {
      const double a_prev = spec.values[i - 1];
      const double a_next = spec.values[i];
      const double b = 0.5 * (a_next - a_prev);

      AdaptedResult next = adapted_temporal(graph, spec.surfaces[i], spec.s_minus, spec.s_plus, spec.f_minus,
                                            spec.f_plus, res.reference, spec.adapted);
      const double c_new = std::max(1.0, b);
      ScalarField t_new(n);
      for (std::size_t q = 0; q < n; ++q) t_new[q] = b + c_new * next.field[q];
      for (const BandTrace& bt : next.trace.bands) res.trace.bands.push_back(bt);

      // The plateau of the old stage must not overlap the dead zone of the
      // new one; separate them with a computed activation threshold.
      const double mid = 0.5 * (a_prev + a_next);
      double lo_max = -std::numeric_limits<double>::infinity(); // t_new on old surfaces
      double hi_min = std::numeric_limits<double>::infinity();  // t_new where old stage plateaus
      for (std::size_t q = 0; q < n; ++q) {
        if (stage[q] >= mid) hi_min = std::min(hi_min, t_new[q]);
      }
      for (std::size_t j = 0; j < i; ++j) {
        for (const std::int32_t xn : extract_level_set(st, stage, spec.values[j]).snapped)
          if (xn >= 0) lo_max = std::max(lo_max, t_new[static_cast<std::size_t>(xn)]);
      }
      if (!(lo_max < hi_min))
        throw SynthesisError("gluing failed", "no activation gap between stage " + std::to_string(i) +
                                                  " and the previous surfaces");
      const double lo = std::min(0.5 * (lo_max + hi_min), 0.0);
      res.trace.notes.push_back("glue stage " + std::to_string(i + 1) + ": activation " + fmt_g6(lo) + " .. " +
                                fmt_g6(b));

      ScalarField glued(n);
      for (std::size_t q = 0; q < n; ++q)
        glued[q] = glue_phi(stage[q], a_prev, a_next) + glue_psi(t_new[q], lo, b);
      stage = std::move(glued);
    }
  }

  // Group averaging makes the result exactly invariant (up to summation
  // order); for isometric groups it also preserves the steep margin.
  res.field = average_field(stage, group);
  res.invariance = invariance_deviation(res.field, group);

  const TimeFunctionReport tf = verify_time_function(graph, res.field);
  res.monotonicity_violations = tf.violations;
  if (tf.violations != 0)
    throw SynthesisError("invariant pipeline failed",
                         "averaged field has monotonicity violations: " + std::to_string(tf.violations));

  if (res.interior.empty()) res.interior.assign(n, 1);
  const ScalarField margin = steepness_margin(st, res.field);
  double mm = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < n; ++q)
    if (res.interior[q] && !std::isnan(margin[q])) mm = std::min(mm, margin[q]);
  res.min_interior_margin = mm;
  if (spec.steep && !(mm >= 1.0 - res.tol_h))
    throw SynthesisError("invariant pipeline failed", "steep margin " + fmt_g6(mm));

  for (std::size_t i = 0; i < m; ++i) {
    const LevelSet ls = extract_level_set(st, res.field, spec.values[i]);
    res.level_hausdorff.push_back(level_set_hausdorff(st, ls, spec.surfaces[i]));
    if (!(res.level_hausdorff.back() <= 2.0 * st.chart().ht()))
      throw SynthesisError("invariant pipeline failed", "level set " + std::to_string(i + 1) +
                                                            " misses its surface by " +
                                                            fmt_g6(res.level_hausdorff.back()));
  }

  // Growth and surface bounds of the final field.
  auto snapped = [&](const SurfaceGraph& sg) {
    std::vector<std::int32_t> out;
    for (int ix = 0; ix < st.chart().nx; ++ix) {
      const int it = static_cast<int>(std::ceil((sg.u[ix] - st.chart().t_lo) / st.chart().ht() - 1e-12));
      const std::int32_t node = st.node_at(it, ix);
      if (node >= 0) out.push_back(node);
    }
    return out;
  };
  for (const std::int32_t xn : snapped(spec.s_plus)) {
    const auto x = static_cast<std::size_t>(xn);
    if (!(res.field[x] > spec.f_plus[static_cast<std::size_t>(st.node_ix(x))]))
      throw SynthesisError("invariant pipeline failed", "upper surface bound fails at node " + std::to_string(xn));
  }
  for (const std::int32_t xn : snapped(spec.s_minus)) {
    const auto x = static_cast<std::size_t>(xn);
    if (!(-res.field[x] > spec.f_minus[static_cast<std::size_t>(st.node_ix(x))]))
      throw SynthesisError("invariant pipeline failed", "lower surface bound fails at node " + std::to_string(xn));
  }
  for (std::size_t q = 0; q < n; ++q) {
    const double tb = res.reference_bands.t[q];
    if (!res.interior.empty() && !res.interior[q]) continue;
    if (st.node_t(q) > spec.s_plus.u[st.node_ix(q)] && !(res.field[q] > tb / 2.0 - 2.0))
      throw SynthesisError("invariant pipeline failed", "future growth bound fails at node " + std::to_string(q));
    if (st.node_t(q) < spec.s_minus.u[st.node_ix(q)] && !(-res.field[q] > -tb / 2.0 - 2.0))
      throw SynthesisError("invariant pipeline failed", "past growth bound fails at node " + std::to_string(q));
  }
  return res;
}

} // namespace tempora
