#include "tempora/spacetime.hpp"

#include <algorithm>
#include <cmath>

#include "tempora/errors.hpp"
#include "tempora/util.hpp"

namespace tempora {

const char* to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::Minkowski2d: return "minkowski2d";
    case ModelFamily::DiamondMinkowski: return "diamond_minkowski";
    case ModelFamily::CylinderProduct: return "cylinder_product";
    case ModelFamily::ConformalWarp: return "conformal_warp";
    case ModelFamily::CarvedMinkowski: return "carved_minkowski";
  }
  return "?";
}

double WarpSpec::omega(double x, double x_extent) const {
  switch (kind) {
    case Kind::Constant: return base;
    case Kind::Sinusoidal: return base + amplitude * std::sin(2.0 * M_PI * mode * x / x_extent);
    case Kind::GaussianBump: {
      const double d = (x - center) / width;
      return base + amplitude * std::exp(-d * d);
    }
  }
  return base;
}

namespace {

// Area fraction of an axis-aligned cell on the non-positive side of a 45-degree
// halfplane a*t + b*x <= c (|a| = |b| = 1). The projection of the cell onto
// the plane normal is a trapezoid; its CDF is piecewise quadratic.
double halfplane_fraction(double a, double b, double c, double ct, double cx, double at, double ax) {
  const double inv = 1.0 / std::sqrt(a * a + b * b);
  const double s = (c - a * ct - b * cx) * inv;
  const double alpha = (std::abs(a) * at + std::abs(b) * ax) * inv;
  const double beta = std::abs(std::abs(a) * at - std::abs(b) * ax) * inv;
  if (s <= -alpha) return 0.0;
  if (s >= alpha) return 1.0;
  const double h = 1.0 / (alpha + beta);
  if (alpha > beta) {
    if (s < -beta) {
      const double d = s + alpha;
      return h * d * d / (2.0 * (alpha - beta));
    }
    if (s > beta) {
      const double d = alpha - s;
      return 1.0 - h * d * d / (2.0 * (alpha - beta));
    }
  }
  return h * (0.5 * (alpha - beta) + (s + beta));
}

bool node_included(const ModelSpec& spec, double t, double x) {
  const double tol = 1e-12 * std::max(1.0, std::abs(spec.t_hi) + std::abs(spec.x_hi));
  switch (spec.family) {
    case ModelFamily::DiamondMinkowski:
      // Nodes on the null boundary stay in as half-cell representatives of
      // the open diamond; their weight comes from the cell fraction, which
      // keeps the total volume exact on the aligned lattice.
      return std::abs(t) + std::abs(x) <= spec.diamond_half_width + tol;
    case ModelFamily::CarvedMinkowski:
      // The closed cone t >= |x| from the origin is removed.
      return t < std::abs(x) - tol;
    default:
      return true;
  }
}

double cell_fraction(const ModelSpec& spec, double ct, double cx, double at, double ax) {
  switch (spec.family) {
    case ModelFamily::DiamondMinkowski: {
      const double w = spec.diamond_half_width;
      double f = halfplane_fraction(1, 1, w, ct, cx, at, ax);
      f *= halfplane_fraction(1, -1, w, ct, cx, at, ax);
      f *= halfplane_fraction(-1, 1, w, ct, cx, at, ax);
      f *= halfplane_fraction(-1, -1, w, ct, cx, at, ax);
      return f;
    }
    case ModelFamily::CarvedMinkowski: {
      // halfplane_fraction computes {a t + b x <= c}; the carve is
      // {t - x >= 0} and {t + x >= 0}, so evaluate at the reflected point.
      const double carved =
          halfplane_fraction(1, -1, 0, -ct, -cx, at, ax) * halfplane_fraction(1, 1, 0, -ct, -cx, at, ax);
      return 1.0 - carved;
    }
    default:
      return 1.0;
  }
}

} // namespace

SampledSpacetime build_model(const ModelSpec& spec) {
  if (spec.nt < 3 || spec.nx < 3) throw InputError("model resolution must be at least 3 nodes per axis");
  if (spec.t_hi <= spec.t_lo) throw InputError("model time range is empty");

  SampledSpacetime st;
  st.family_ = spec.family;
  Chart& chart = st.chart_;
  chart.t_lo = spec.t_lo;
  chart.t_hi = spec.t_hi;
  chart.nt = spec.nt;
  chart.nx = spec.nx;
  chart.periodic = spec.circle_topology();
  if (chart.periodic) {
    if (spec.circumference <= 0.0) throw InputError("circle circumference must be positive");
    chart.x_lo = 0.0;
    chart.x_extent = spec.circumference;
  } else {
    if (spec.x_hi <= spec.x_lo) throw InputError("model spatial range is empty");
    chart.x_lo = spec.x_lo;
    chart.x_extent = spec.x_hi - spec.x_lo;
  }

  const std::size_t g_count = chart.grid_count();
  st.node_of_grid_.assign(g_count, -1);

  const double ht = chart.ht();
  const double hx = chart.hx();

  for (int it = 0; it < chart.nt; ++it) {
    for (int ix = 0; ix < chart.nx; ++ix) {
      const double t = chart.t_coord(it);
      const double x = chart.x_coord(ix);

      // Voronoi cell of the node, clamped to the chart box.
      const double t0 = std::max(chart.t_lo, t - 0.5 * ht);
      const double t1 = std::min(chart.t_hi, t + 0.5 * ht);
      double x0 = x - 0.5 * hx;
      double x1 = x + 0.5 * hx;
      if (!chart.periodic) {
        x0 = std::max(chart.x_lo, x0);
        x1 = std::min(chart.x_lo + chart.x_extent, x1);
      }
      const double cell_ct = 0.5 * (t0 + t1), cell_cx = 0.5 * (x0 + x1);
      const double cell_at = 0.5 * (t1 - t0), cell_ax = 0.5 * (x1 - x0);

      if (!node_included(spec, t, x)) continue;
      const double fraction = cell_fraction(spec, cell_ct, cell_cx, cell_at, cell_ax);
      if (!(fraction > 0.0)) continue;

      Sym2 g = Sym2::minkowski();
      if (spec.family == ModelFamily::ConformalWarp) {
        const double om = spec.warp.omega(x, chart.x_extent);
        if (!(om > 0.0))
          throw ConstructionError("warp factor is not strictly positive at column " + std::to_string(ix));
        g = g.scaled(om * om);
      }
      if (!g.is_lorentzian())
        throw ConstructionError("metric is not Lorentzian at node (it=" + std::to_string(it) +
                                ", ix=" + std::to_string(ix) + ")");
      if (classify(g, 1.0, 0.0) != CausalClass::Timelike)
        throw ConstructionError("orientation vector is not timelike at node (it=" + std::to_string(it) +
                                ", ix=" + std::to_string(ix) + ")");

      const double sqrt_det = std::sqrt(std::abs(g.det()));
      const double w = sqrt_det * (t1 - t0) * (x1 - x0) * fraction;

      st.node_of_grid_[chart.gid(it, ix)] = static_cast<std::int32_t>(st.grid_of_node_.size());
      st.grid_of_node_.push_back(chart.gid(it, ix));
      st.metric_.push_back(g);
      st.orientation_.push_back({1.0, 0.0});
      st.volume_density_.push_back(w);
    }
  }
  st.excluded_count_ = g_count - st.grid_of_node_.size();
  if (st.grid_of_node_.empty()) throw ConstructionError("model has no included nodes");

  st.column_lo_.assign(chart.nx, -1);
  st.column_hi_.assign(chart.nx, -1);
  for (int ix = 0; ix < chart.nx; ++ix) {
    for (int it = 0; it < chart.nt; ++it) {
      const std::int32_t n = st.node_of_grid_[chart.gid(it, ix)];
      if (n < 0) continue;
      if (st.column_lo_[ix] < 0) st.column_lo_[ix] = n;
      st.column_hi_[ix] = n;
    }
  }
  return st;
}

// --- surfaces ----------------------------------------------------------------

SurfaceGraph make_surface(const SampledSpacetime& st, std::vector<double> u) {
  const Chart& chart = st.chart();
  if (u.size() != static_cast<std::size_t>(chart.nx)) throw InputError("surface value count must match column count");

  const int nseg = chart.periodic ? chart.nx : chart.nx - 1;
  for (int ix = 0; ix < chart.nx; ++ix) {
    if (u[ix] <= chart.t_lo || u[ix] >= chart.t_hi)
      throw RangeError("surface leaves the chart interior at column " + std::to_string(ix));
    const int it = static_cast<int>(std::lround((u[ix] - chart.t_lo) / chart.ht()));
    if (st.node_at(it, ix) < 0)
      throw InputError("surface exits the included region at column " + std::to_string(ix));
  }
  for (int s = 0; s < nseg; ++s) {
    const int ix0 = s;
    const int ix1 = chart.wrap_ix(s + 1);
    const double du = u[ix1] - u[ix0];
    const int it0 = static_cast<int>(std::lround((u[ix0] - chart.t_lo) / chart.ht()));
    const int it1 = static_cast<int>(std::lround((u[ix1] - chart.t_lo) / chart.ht()));
    const std::int32_t n0 = st.node_at(it0, ix0);
    const std::int32_t n1 = st.node_at(it1, ix1);
    const Sym2 g = Sym2::midpoint(st.metric(n0), st.metric(n1));
    const double cone_slope = std::sqrt(-g.xx / g.tt); // dt per dx on the light cone... inverted below
    // Tangent (du, hx) must be spacelike with margin: |du/hx| < (1-eps) * sqrt(-g_xx/g_tt).
    const double limit = (1.0 - kSurfaceSlopeMargin) / cone_slope;
    if (std::abs(du / chart.hx()) >= limit)
      throw InputError("surface is not spacelike: slope " + fmt_g6(std::abs(du / chart.hx())) +
                       " at column " + std::to_string(ix0) + " exceeds " + fmt_g6(limit));
  }
  SurfaceGraph sg;
  sg.u = std::move(u);
  return sg;
}

SurfaceGraph surface_between(const SampledSpacetime& st, double t_level) {
  const Chart& chart = st.chart();
  if (t_level <= chart.t_lo || t_level >= chart.t_hi)
    throw RangeError("surface level " + fmt_g6(t_level) + " is outside the chart interior");
  return make_surface(st, std::vector<double>(chart.nx, t_level));
}

// --- groups ------------------------------------------------------------------

namespace {

int apply_column(const Chart& chart, int shift, bool flip, int ix) {
  int v = flip ? (chart.periodic ? (chart.nx - ix) % chart.nx : chart.nx - 1 - ix) : ix;
  v += shift;
  if (chart.periodic) {
    v %= chart.nx;
    if (v < 0) v += chart.nx;
  }
  return v;
}

GroupElement make_element(const SampledSpacetime& st, int shift, bool flip, std::string name) {
  const Chart& chart = st.chart();
  GroupElement e;
  e.shift = shift;
  e.flip = flip;
  e.name = std::move(name);
  e.map.resize(st.node_count());
  e.conf2.resize(st.node_count());
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    const int it = st.node_it(n);
    const int ix = st.node_ix(n);
    const int jx = apply_column(chart, shift, flip, ix);
    const std::int32_t m = (jx < 0 || jx >= chart.nx) ? -1 : st.node_at(it, jx);
    if (m < 0)
      throw ConfigError("group", "element " + e.name + " does not map the included grid to itself at node (it=" +
                                     std::to_string(it) + ", ix=" + std::to_string(ix) + ")");
    e.map[n] = m;
    e.conf2[n] = st.metric(m).tt / st.metric(n).tt;
  }
  return e;
}

double element_pullback_residual(const SampledSpacetime& st, const GroupElement& e) {
  double res = 0.0;
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    const Sym2& gp = st.metric(n);
    const Sym2& gq = st.metric(e.map[n]);
    // d(phi) = diag(1, +-1): pullback components at p.
    const double sgn = e.flip ? -1.0 : 1.0;
    const double c2 = e.conf2[n];
    res = std::max(res, std::abs(gq.tt - c2 * gp.tt));
    res = std::max(res, std::abs(sgn * gq.tx - c2 * gp.tx));
    res = std::max(res, std::abs(gq.xx - c2 * gp.xx));
  }
  return res;
}

} // namespace

GroupAction GroupAction::unchecked(std::vector<GroupElement> elements, bool isometric, bool preserves_orientation) {
  GroupAction g;
  g.elements_ = std::move(elements);
  g.is_isometric_ = isometric;
  g.preserves_time_orientation_ = preserves_orientation;
  return g;
}

GroupAction build_group(const SampledSpacetime& st, const GroupSpec& spec) {
  const Chart& chart = st.chart();
  const int k = spec.rotation_order;
  if (k < 1) throw ConfigError("group.rotation_order", "rotation order must be at least 1");
  if (k > 1) {
    if (!chart.periodic) throw ConfigError("group.rotation_order", "rotations require a circle spatial slice");
    if (chart.nx % k != 0)
      throw ConfigError("group.rotation_order", "column count " + std::to_string(chart.nx) +
                                                    " is not divisible by rotation order " + std::to_string(k));
  }
  if (spec.reflection && !chart.periodic) {
    // Reflection about the slice midpoint needs a symmetric interval chart.
    const double mid = chart.x_lo + 0.5 * chart.x_extent;
    if (std::abs(mid) > 1e-12 * chart.x_extent)
      throw ConfigError("group.reflection", "reflection requires a symmetric spatial interval");
  }

  GroupAction g;
  const int step = k > 1 ? chart.nx / k : 0;
  for (int j = 0; j < std::max(1, k); ++j) {
    const int shift = j * step;
    g.elements_.push_back(make_element(st, shift, false, j == 0 ? "id" : "rot" + std::to_string(j)));
    if (spec.reflection) g.elements_.push_back(make_element(st, shift, true, "ref" + std::to_string(j)));
  }

  // Group table check: closure, identity, inverses.
  auto norm_shift = [&](int s) {
    if (!chart.periodic) return 0;
    int m = s % chart.nx;
    return m < 0 ? m + chart.nx : m;
  };
  auto find = [&](int shift, bool flip) -> int {
    for (std::size_t i = 0; i < g.elements_.size(); ++i)
      if (g.elements_[i].flip == flip && norm_shift(g.elements_[i].shift) == norm_shift(shift))
        return static_cast<int>(i);
    return -1;
  };
  if (find(0, false) != 0) throw ConfigError("group", "identity element missing");
  for (const auto& a : g.elements_) {
    bool has_inverse = false;
    for (const auto& b : g.elements_) {
      const int shift = a.shift + (a.flip ? -b.shift : b.shift);
      const bool flip = a.flip != b.flip;
      if (find(shift, flip) < 0) throw ConfigError("group", "composition table is not closed");
      if (norm_shift(shift) == 0 && !flip) has_inverse = true;
    }
    if (!has_inverse) throw ConfigError("group", "element " + a.name + " has no inverse");
  }

  double res = 0.0;
  bool isometric = true;
  for (const auto& e : g.elements_) {
    res = std::max(res, element_pullback_residual(st, e));
    for (double c2 : e.conf2)
      if (std::abs(c2 - 1.0) > 1e-12) isometric = false;
  }
  if (res > 1e-9)
    throw ConfigError("group", "pullback of the metric deviates from a conformal multiple by " + fmt_g6(res));
  g.pullback_residual_ = res;
  g.is_isometric_ = isometric;

  // Orientation push-forward: d(phi) fixes the time axis, so the image of the
  // future vector must share the cone component with the orientation there.
  bool preserves = true;
  for (const auto& e : g.elements_) {
    for (std::size_t n = 0; n < st.node_count() && preserves; ++n) {
      const auto& X = st.orientation(n);
      const auto& Y = st.orientation(e.map[n]);
      if (!same_cone(st.metric(e.map[n]), X[0], e.flip ? -X[1] : X[1], Y[0], Y[1])) preserves = false;
    }
  }
  g.preserves_time_orientation_ = preserves;
  if (!preserves) throw ConfigError("group", "group element reverses the time orientation");
  return g;
}

} // namespace tempora
