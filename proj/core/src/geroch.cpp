#include "tempora/geroch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tempora/errors.hpp"
#include "tempora/util.hpp"

namespace tempora {

VolumeMeasure VolumeMeasure::from_spacetime(const SampledSpacetime& st, double damping_t_scale) {
  VolumeMeasure mu;
  mu.weights.resize(st.node_count());
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    double w = st.volume_density(n);
    if (damping_t_scale > 0.0) {
      const double c = std::cosh(st.node_t(n) / damping_t_scale);
      w /= c * c;
    }
    if (!(w > 0.0)) throw InputError("volume weight must be positive at node " + std::to_string(n));
    mu.weights[n] = w;
  }
  mu.normalize();
  return mu;
}

void VolumeMeasure::normalize() {
  const double s = total();
  if (!(s > 0.0)) throw InputError("measure has no mass");
  for (double& w : weights) w /= s;
}

double VolumeMeasure::total() const {
  KahanSum s;
  for (double w : weights) s.add(w);
  return s.value();
}

GerochPair geroch_pm(const CausalGraph& graph, const VolumeMeasure& mu, int threads) {
  const std::size_t n = graph.node_count();
  if (mu.weights.size() != n) throw InputError("measure size does not match graph");
  const BitMatrix& jp = graph.jplus();

  GerochPair out;
  out.t_plus = ScalarField(n);
  out.t_minus = ScalarField(n);

  // t_plus by row reduction, parallel by node (per-node Kahan, fixed order).
  parallel_for_each(n, threads, [&](std::size_t x) {
    KahanSum s;
    jp.for_each_in_row(x, [&](std::size_t q) { s.add(mu.weights[q]); });
    out.t_plus[x] = -s.value();
  });

  // t_minus by a transpose accumulation over the same closure, so the past
  // family never has to be materialized: mu(J-(x)) = sum over q with x in J+(q).
  std::vector<double> acc(n, 0.0), comp(n, 0.0);
  for (std::size_t q = 0; q < n; ++q) {
    const double w = mu.weights[q];
    jp.for_each_in_row(q, [&](std::size_t x) {
      const double y = w - comp[x];
      const double t = acc[x] + y;
      comp[x] = (t - acc[x]) - y;
      acc[x] = t;
    });
  }
  for (std::size_t x = 0; x < n; ++x) out.t_minus[x] = acc[x];
  return out;
}

ScalarField geroch_cauchy(const ScalarField& t_minus, const ScalarField& t_plus) {
  if (t_minus.size() != t_plus.size()) throw InputError("field sizes differ");
  ScalarField t(t_minus.size());
  for (std::size_t x = 0; x < t.size(); ++x) {
    if (!(t_minus[x] > 0.0) || !(t_plus[x] < 0.0))
      throw Error("cone-volume sign invariant violated at node " + std::to_string(x));
    t[x] = std::log(-t_minus[x] / t_plus[x]);
  }
  return t;
}

TimeFunctionReport verify_time_function(const CausalGraph& graph, const ScalarField& f) {
  TimeFunctionReport rep;
  rep.edges = graph.edge_count();
  for (std::size_t p = 0; p < graph.node_count(); ++p) {
    const auto [e0, e1] = graph.out_range(p);
    for (std::size_t e = e0; e < e1; ++e) {
      const auto q = static_cast<std::size_t>(graph.edge_to(e));
      if (!(f[q] > f[p])) { // also catches NaN
        if (rep.violations == 0) {
          rep.first_violation_from = static_cast<std::int32_t>(p);
          rep.first_violation_to = static_cast<std::int32_t>(q);
        }
        ++rep.violations;
      }
    }
  }
  return rep;
}

ChainRangeReport verify_cauchy(const CausalGraph& graph, const ScalarField& f, double threshold,
                               const std::vector<std::int32_t>& seeds, std::size_t max_reported) {
  if (!(threshold > 0.0)) throw InputError("verify_cauchy threshold must be positive");
  ChainRangeReport rep;
  for (const std::int32_t seed : seeds) {
    const auto chain = graph.inextendible_chain(static_cast<std::size_t>(seed));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const std::int32_t n : chain) {
      lo = std::min(lo, f[static_cast<std::size_t>(n)]);
      hi = std::max(hi, f[static_cast<std::size_t>(n)]);
    }
    const bool spans = lo <= -threshold && hi >= threshold;
    ++rep.chains;
    if (!spans) {
      ++rep.failures;
      if (rep.failing.size() < max_reported) rep.failing.push_back({seed, lo, hi, spans});
    }
  }
  return rep;
}

ChainExtrema column_chain_extrema(const CausalGraph& graph, const ScalarField& f, int ix) {
  const SampledSpacetime& st = graph.spacetime();
  const std::int32_t lo = st.lowest_node_in_column(ix);
  if (lo < 0) throw InputError("column " + std::to_string(ix) + " has no included nodes");
  ChainExtrema out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  std::int32_t n = lo;
  const int ix0 = st.node_ix(static_cast<std::size_t>(lo));
  while (n >= 0) {
    out.min_value = std::min(out.min_value, f[static_cast<std::size_t>(n)]);
    out.max_value = std::max(out.max_value, f[static_cast<std::size_t>(n)]);
    n = st.node_at(st.node_it(static_cast<std::size_t>(n)) + 1, ix0);
  }
  return out;
}

LevelSet extract_level_set(const SampledSpacetime& st, const ScalarField& f, double level) {
  const Chart& chart = st.chart();
  LevelSet ls;
  ls.level = level;
  ls.t_cross.assign(chart.nx, std::numeric_limits<double>::quiet_NaN());
  ls.snapped.assign(chart.nx, -1);
  for (int ix = 0; ix < chart.nx; ++ix) {
    std::int32_t prev = -1;
    for (int it = 0; it < chart.nt; ++it) {
      const std::int32_t n = st.node_at(it, ix);
      if (n < 0) {
        prev = -1;
        continue;
      }
      if (prev >= 0) {
        const double f0 = f[static_cast<std::size_t>(prev)];
        const double f1 = f[static_cast<std::size_t>(n)];
        if (f0 <= level && level < f1) {
          const double lam = (level - f0) / (f1 - f0);
          ls.t_cross[ix] = st.node_t(static_cast<std::size_t>(prev)) + lam * chart.ht();
          ls.snapped[ix] = lam <= 0.5 ? prev : n;
          ++ls.crossings;
          break;
        }
      }
      prev = n;
    }
  }
  return ls;
}

std::size_t level_band_causal_edges(const CausalGraph& graph, const LevelSet& ls) {
  const SampledSpacetime& st = graph.spacetime();
  std::vector<std::uint8_t> in_band(graph.node_count(), 0);
  for (const std::int32_t n : ls.snapped)
    if (n >= 0) in_band[static_cast<std::size_t>(n)] = 1;
  (void)st;
  std::size_t bad = 0;
  for (std::size_t p = 0; p < graph.node_count(); ++p) {
    if (!in_band[p]) continue;
    const auto [e0, e1] = graph.out_range(p);
    for (std::size_t e = e0; e < e1; ++e)
      if (in_band[static_cast<std::size_t>(graph.edge_to(e))]) ++bad;
  }
  return bad;
}

double level_set_hausdorff(const SampledSpacetime& st, const LevelSet& ls, const SurfaceGraph& s) {
  double worst = 0.0;
  for (int ix = 0; ix < st.chart().nx; ++ix) {
    if (std::isnan(ls.t_cross[ix])) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(ls.t_cross[ix] - s.u[ix]));
  }
  return worst;
}

Foliation foliation_export(const CausalGraph& graph, const ScalarField& f, const std::vector<double>& levels) {
  const SampledSpacetime& st = graph.spacetime();
  const TimeFunctionReport tf = verify_time_function(graph, f);
  if (tf.violations != 0)
    throw InputError("foliation export requires a verified time function (violations: " +
                     std::to_string(tf.violations) + ")");
  Foliation fol;
  for (const double level : levels) {
    LevelSet ls = extract_level_set(st, f, level);
    if (ls.crossings == 0) throw RangeError("requested level " + fmt_g6(level) + " is outside the field range");
    fol.levels.push_back(std::move(ls));
  }
  if (!fol.levels.empty()) fol.flow_line_label = fol.levels.front().t_cross;
  return fol;
}

} // namespace tempora
