#include "tempora/scalar_field.hpp"

#include <limits>

namespace tempora {

ScalarField field_from(const SampledSpacetime& st, const std::function<double(double, double)>& f_of_tx) {
  ScalarField f(st.node_count());
  for (std::size_t n = 0; n < st.node_count(); ++n) f[n] = f_of_tx(st.node_t(n), st.node_x(n));
  return f;
}

namespace {

// One-axis derivative from up to two neighbors on each side.
// Returns false when no neighbor exists on either side.
bool axis_derivative(double h, double f0, bool m1, double fm1, bool m2, double fm2, bool p1, double fp1, bool p2,
                     double fp2, double& out) {
  if (m1 && p1) {
    out = (fp1 - fm1) / (2.0 * h);
    return true;
  }
  if (p1 && p2) {
    out = (-3.0 * f0 + 4.0 * fp1 - fp2) / (2.0 * h);
    return true;
  }
  if (m1 && m2) {
    out = (3.0 * f0 - 4.0 * fm1 + fm2) / (2.0 * h);
    return true;
  }
  if (p1) {
    out = (fp1 - f0) / h;
    return true;
  }
  if (m1) {
    out = (f0 - fm1) / h;
    return true;
  }
  return false;
}

} // namespace

Gradient2 local_gradient(const SampledSpacetime& st, const ScalarField& f, std::size_t node) {
  const Chart& chart = st.chart();
  const int it = st.node_it(node);
  const int ix = st.node_ix(node);
  auto val = [&](int dit, int dix, bool& ok) {
    const std::int32_t m = st.node_at(it + dit, ix + dix);
    ok = m >= 0;
    return ok ? f[static_cast<std::size_t>(m)] : 0.0;
  };
  bool tm1, tm2, tp1, tp2, xm1, xm2, xp1, xp2;
  const double ftm1 = val(-1, 0, tm1), ftm2 = val(-2, 0, tm2), ftp1 = val(1, 0, tp1), ftp2 = val(2, 0, tp2);
  const double fxm1 = val(0, -1, xm1), fxm2 = val(0, -2, xm2), fxp1 = val(0, 1, xp1), fxp2 = val(0, 2, xp2);
  Gradient2 out;
  const bool okt = axis_derivative(chart.ht(), f[node], tm1, ftm1, tm2, ftm2, tp1, ftp1, tp2, ftp2, out.dt);
  const bool okx = axis_derivative(chart.hx(), f[node], xm1, fxm1, xm2, fxm2, xp1, fxp1, xp2, fxp2, out.dx);
  out.valid = okt && okx;
  return out;
}

double lorentz_pair(const SampledSpacetime& st, std::size_t node, const Gradient2& a, const Gradient2& b) {
  double vt, vx;
  st.metric(node).solve(b.dt, b.dx, vt, vx);
  return a.dt * vt + a.dx * vx;
}

std::vector<Gradient2> field_gradients(const SampledSpacetime& st, const ScalarField& f) {
  std::vector<Gradient2> g(st.node_count());
  for (std::size_t n = 0; n < st.node_count(); ++n) g[n] = local_gradient(st, f, n);
  return g;
}

ScalarField lorentz_sq_gradient(const SampledSpacetime& st, const ScalarField& f) {
  const auto grads = field_gradients(st, f);
  ScalarField out(st.node_count());
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    if (!grads[n].valid) {
      out[n] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double vt, vx;
    st.metric(n).solve(grads[n].dt, grads[n].dx, vt, vx);
    out[n] = grads[n].dt * vt + grads[n].dx * vx;
  }
  return out;
}

ScalarField steepness_margin(const SampledSpacetime& st, const ScalarField& f) {
  ScalarField m = lorentz_sq_gradient(st, f);
  for (double& v : m.values) v = -v;
  return m;
}

AlmostTemporalReport almost_temporal_scan(const SampledSpacetime& st, const ScalarField& f, double zero_floor,
                                          double cone_tolerance) {
  const auto grads = field_gradients(st, f);
  AlmostTemporalReport rep;
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    if (!grads[n].valid) continue;
    ++rep.checked;
    const double dt = grads[n].dt, dx = grads[n].dx;
    const double euclid2 = dt * dt + dx * dx;
    if (euclid2 <= zero_floor * zero_floor) continue;
    double vt, vx;
    st.metric(n).solve(dt, dx, vt, vx);
    const double q = dt * vt + dx * vx; // g(grad f, grad f)
    // Past-directed: g(grad f, X) = df(X) = dt here (orientation is (1,0)).
    const bool causal = q <= cone_tolerance * euclid2;
    const bool past = dt > -cone_tolerance * std::sqrt(euclid2);
    if (!(causal && past)) {
      if (rep.violations == 0) rep.first_violation = n;
      ++rep.violations;
    }
  }
  return rep;
}

} // namespace tempora
