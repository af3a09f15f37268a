#include "tempora/steep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "tempora/errors.hpp"
#include "tempora/util.hpp"

namespace tempora {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double median_proper_row_height(const SampledSpacetime& st) {
  std::vector<double> v;
  v.reserve(st.node_count());
  for (std::size_t n = 0; n < st.node_count(); ++n) v.push_back(std::sqrt(-st.metric(n).tt));
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2] * st.chart().ht();
}

// Saturating reparametrization used in the collar profile: identity down to
// -0.4, then bends toward an asymptote at -0.95 so the profile denominator
// stays positive for arbitrarily negative arguments.
double saturate_below(double y) {
  if (y >= -0.4) return y;
  const double z = -(y + 0.4);
  return -0.4 - 0.55 * z / (z + 0.55);
}

} // namespace

double default_tol_h(const SampledSpacetime& st, const SteepOptions& opt) {
  return opt.tol_h_coeff * (st.chart().ht() + st.chart().hx());
}

std::string SynthesisTrace::to_text() const {
  std::ostringstream ss;
  ss << "synthesis trace\n";
  for (const BandTrace& b : bands) {
    ss << "band " << (b.direction > 0 ? "+" : "-") << b.band << ": pairs=" << b.pairs << " bumps=" << b.bumps
       << " max_constant=" << fmt_g6(b.max_constant) << " value_scale=" << fmt_g6(b.value_scale)
       << " surface_value=" << fmt_g6(b.surface_value) << " min_margin=" << fmt_g6(b.min_margin) << "\n";
  }
  for (const std::string& n : notes) ss << "note: " << n << "\n";
  return ss.str();
}

// ---------------------------------------------------------------------------
// Banded reference.
// ---------------------------------------------------------------------------

BandedTime build_banded_time(const CausalGraph& graph, const ScalarField& t_ref, int band_rows) {
  const SampledSpacetime& st = graph.spacetime();
  const Chart& chart = st.chart();
  if (band_rows < 2) throw InputError("band_rows must be at least 2");

  // Column node lists (ascending rows).
  std::vector<std::vector<std::int32_t>> cols(chart.nx);
  for (int ix = 0; ix < chart.nx; ++ix)
    for (int it = 0; it < chart.nt; ++it) {
      const std::int32_t n = st.node_at(it, ix);
      if (n >= 0) cols[ix].push_back(n);
    }

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    lo = std::min(lo, t_ref[n]);
    hi = std::max(hi, t_ref[n]);
  }
  if (!(lo < 0.0 && hi > 0.0))
    throw InputError("banded reference requires a reference field straddling zero");

  auto first_at_or_above = [&](const std::vector<std::int32_t>& col, double level) -> int {
    for (std::size_t i = 0; i < col.size(); ++i)
      if (t_ref[static_cast<std::size_t>(col[i])] >= level) return static_cast<int>(i);
    return -1;
  };
  auto last_at_or_below = [&](const std::vector<std::int32_t>& col, double level) -> int {
    for (std::size_t i = col.size(); i-- > 0;)
      if (t_ref[static_cast<std::size_t>(col[i])] <= level) return static_cast<int>(i);
    return -1;
  };

  std::vector<double> up{0.0};
  while (true) {
    double cand = -std::numeric_limits<double>::infinity();
    bool ok = true;
    for (const auto& col : cols) {
      if (col.empty()) continue;
      const int i = first_at_or_above(col, up.back());
      if (i < 0 || i + band_rows >= static_cast<int>(col.size())) {
        ok = false;
        break;
      }
      cand = std::max(cand, t_ref[static_cast<std::size_t>(col[static_cast<std::size_t>(i + band_rows)])]);
    }
    if (!ok || !(cand > up.back())) break;
    up.push_back(cand);
  }
  std::vector<double> down{0.0};
  while (true) {
    double cand = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (const auto& col : cols) {
      if (col.empty()) continue;
      const int i = last_at_or_below(col, down.back());
      if (i < 0 || i - band_rows < 0) {
        ok = false;
        break;
      }
      cand = std::min(cand, t_ref[static_cast<std::size_t>(col[static_cast<std::size_t>(i - band_rows)])]);
    }
    if (!ok || !(cand < down.back())) break;
    down.push_back(cand);
  }

  BandedTime bt;
  bt.n_up = static_cast<int>(up.size()) - 1;
  bt.n_down = static_cast<int>(down.size()) - 1;
  if (bt.n_up < 1 || bt.n_down < 1)
    throw InputError("chart too shallow for the requested band height");
  bt.levels.resize(static_cast<std::size_t>(bt.n_up + bt.n_down + 1));
  for (int a = -bt.n_down; a <= bt.n_up; ++a)
    bt.levels[static_cast<std::size_t>(a + bt.n_down)] = a >= 0 ? up[static_cast<std::size_t>(a)]
                                                                : down[static_cast<std::size_t>(-a)];

  bt.t = ScalarField(st.node_count());
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    const double v = t_ref[n];
    int a = 0;
    // Segment containing v; clamp to end segments for extrapolation.
    if (v >= 0.0) {
      a = 0;
      while (a + 1 < bt.n_up && v >= bt.level_of(a + 1)) ++a;
    } else {
      a = -1;
      while (a - 1 > -bt.n_down && v < bt.level_of(a)) --a;
    }
    const double l0 = bt.level_of(a);
    const double l1 = bt.level_of(a + 1);
    bt.t[n] = a + (v - l0) / (l1 - l0);
  }
  return bt;
}

// ---------------------------------------------------------------------------
// pick_constant
// ---------------------------------------------------------------------------

double pick_constant(const SampledSpacetime& st, const ScalarField& f, const ScalarField& tau,
                     const std::vector<std::int32_t>& K, double target) {
  double worst_root = 0.0;
  for (const std::int32_t node : K) {
    const auto n = static_cast<std::size_t>(node);
    const Gradient2 gt = local_gradient(st, tau, n);
    if (!gt.valid) throw InputError("pick_constant: gradient unavailable at node " + std::to_string(node));
    const double A = lorentz_pair(st, n, gt, gt);
    if (!(A < 0.0))
      throw InputError("pick_constant: gradient of the added field is not timelike at node " + std::to_string(node));
    const Gradient2 gf = local_gradient(st, f, n);
    const double B = gf.valid ? lorentz_pair(st, n, gf, gt) : 0.0;
    const double C = gf.valid ? lorentz_pair(st, n, gf, gf) : 0.0;
    const double D = B * B - A * (C + target);
    if (D <= 0.0) continue; // satisfied for every c
    const double root = (B + std::sqrt(D)) / (-A);
    worst_root = std::max(worst_root, root);
  }
  const double c = 0.5 * (std::floor(worst_root / 0.5) + 1.0);
  return std::max(1.0, c);
}

// ---------------------------------------------------------------------------
// Cone bumps and coverings.
// ---------------------------------------------------------------------------

ConeBump make_cone_bump(const CausalGraph& graph, std::int32_t apex, double eta0) {
  if (!(eta0 > 0.0)) throw InputError("cone bump scale must be positive");
  ConeBump b;
  b.apex = apex;
  b.eta0 = eta0;
  const auto tau = graph.proper_time_from(static_cast<std::size_t>(apex));
  b.j = ScalarField(graph.node_count());
  for (std::size_t q = 0; q < graph.node_count(); ++q)
    b.j[q] = tau[q] > 0.0 ? std::exp(-eta0 / (tau[q] * tau[q])) : 0.0;
  return b;
}

bool FatConeCovering::complete() const { return min_multiplicity() >= 1; }

int FatConeCovering::min_multiplicity() const {
  int m = std::numeric_limits<int>::max();
  if (surface_nodes.empty()) return 0;
  for (std::size_t i = 0; i < surface_nodes.size(); ++i)
    m = std::min({m, outer_multiplicity[i], inner_multiplicity[i]});
  return m;
}

namespace {

std::vector<std::int32_t> snapped_surface_nodes(const SampledSpacetime& st, const SurfaceGraph& s) {
  const Chart& chart = st.chart();
  std::vector<std::int32_t> out;
  for (int ix = 0; ix < chart.nx; ++ix) {
    const int it = static_cast<int>(std::ceil((s.u[ix] - chart.t_lo) / chart.ht() - 1e-12));
    const std::int32_t n = st.node_at(it, ix);
    if (n >= 0) out.push_back(n);
  }
  return out;
}

// Greedy cone covering of a target node set. `chron(p, x)` must answer
// whether x lies in the open cone of p; `place(x, depth, shift)` proposes an
// apex node for target x. Used by both the public covering and the banded
// synthesis.
struct GreedyCoverer {
  const SampledSpacetime& st;
  std::function<bool(std::int32_t, std::int32_t)> chron;
  std::function<std::int32_t(std::int32_t, int, int)> place;
  int depth_rows;

  FatConeCovering run(const std::vector<std::int32_t>& targets) {
    FatConeCovering cov;
    cov.surface_nodes = targets;
    std::vector<std::uint8_t> covered(targets.size(), 0);
    const int shift0 = std::max(0, depth_rows - 2);
    for (int pass = 0; pass < 2; ++pass) {
      const int shift = pass == 0 ? shift0 : 0;
      for (std::size_t i = 0; i < targets.size(); ++i) {
        if (covered[i]) continue;
        const std::int32_t outer = place(targets[i], depth_rows, shift);
        if (outer < 0) {
          if (pass == 0) continue;
          throw ConfigError("covering", "coverage impossible: the cone band leaves the chart below target node " +
                                            std::to_string(targets[i]));
        }
        const std::int32_t inner = place(outer, 1, 0);
        if (inner < 0 || !chron(inner, outer))
          throw ConfigError("covering", "inner apex is not chronologically below its outer apex");
        cov.pairs.push_back({inner, outer});
        for (std::size_t k = 0; k < targets.size(); ++k)
          if (!covered[k] && chron(outer, targets[k])) covered[k] = 1;
      }
    }
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (!covered[i])
        throw ConfigError("covering", "surface node " + std::to_string(targets[i]) + " is not covered");
    cov.outer_multiplicity.assign(targets.size(), 0);
    cov.inner_multiplicity.assign(targets.size(), 0);
    for (const ConePair& p : cov.pairs) {
      for (std::size_t i = 0; i < targets.size(); ++i) {
        if (chron(p.outer, targets[i])) ++cov.outer_multiplicity[i];
        if (chron(p.inner, targets[i])) ++cov.inner_multiplicity[i];
      }
    }
    return cov;
  }
};

} // namespace

FatConeCovering fat_cone_covering(const CausalGraph& graph, const SurfaceGraph& surface, double depth_t) {
  const SampledSpacetime& st = graph.spacetime();
  if (!(depth_t > 0.0)) throw InputError("covering depth must be positive");
  const int depth_rows = std::max(1, static_cast<int>(std::lround(depth_t / st.chart().ht())));
  const auto targets = snapped_surface_nodes(st, surface);
  if (targets.empty()) throw InputError("surface has no included nodes");
  const BitMatrix& ip = graph.iplus();

  GreedyCoverer cov{
      st,
      [&](std::int32_t p, std::int32_t x) { return ip.test(static_cast<std::size_t>(p), static_cast<std::size_t>(x)); },
      [&](std::int32_t x, int depth, int shift) -> std::int32_t {
        const int it = st.node_it(static_cast<std::size_t>(x)) - depth;
        for (int s = shift; s >= 0; --s) {
          const std::int32_t n = st.node_at(it, st.node_ix(static_cast<std::size_t>(x)) + s);
          if (n >= 0) return n;
        }
        return -1;
      },
      depth_rows};
  return cov.run(targets);
}

// ---------------------------------------------------------------------------
// BandedSynthesizer
// ---------------------------------------------------------------------------

BandedSynthesizer::BandedSynthesizer(const CausalGraph& graph, ScalarField banded_reference, int n_bands,
                                     int direction, SteepOptions opt, double apex_floor)
    : g_(graph),
      st_(graph.spacetime()),
      s_ref_(std::move(banded_reference)),
      n_bands_(n_bands),
      dir_(direction),
      opt_(opt),
      apex_floor_(apex_floor),
      ht_proper_(median_proper_row_height(graph.spacetime())) {
  if (direction != 1 && direction != -1) throw InputError("direction must be +1 or -1");
  if (n_bands_ < 1) throw InputError("banded synthesis needs at least one band");
  if (graph.stencil_radius() < 2)
    throw InputError("temporal synthesis needs stencil radius >= 2 (coarser stencils have no interior cone facets)");
}

bool BandedSynthesizer::in_dir_future(std::size_t p, std::size_t q) const {
  return dir_ > 0 ? g_.jplus().test(p, q) : g_.jminus().test(p, q);
}

bool BandedSynthesizer::in_dir_chron(std::size_t p, std::size_t q) const {
  return dir_ > 0 ? g_.iplus().test(p, q) : g_.iminus().test(p, q);
}

std::int32_t BandedSynthesizer::node_toward_past(std::size_t x, int rows) const {
  return st_.node_at(st_.node_it(x) - dir_ * rows, st_.node_ix(x));
}

std::vector<double> BandedSynthesizer::tau_from(std::int32_t apex, double s_max) const {
  std::vector<double> dist(g_.node_count(), kNegInf);
  dist[static_cast<std::size_t>(apex)] = 0.0;
  const auto a = static_cast<std::size_t>(apex);
  if (dir_ > 0) {
    for (std::size_t p = a; p < g_.node_count(); ++p) {
      if (dist[p] == kNegInf || s(p) > s_max) continue;
      const auto [e0, e1] = g_.out_range(p);
      for (std::size_t e = e0; e < e1; ++e) {
        const auto q = static_cast<std::size_t>(g_.edge_to(e));
        dist[q] = std::max(dist[q], dist[p] + g_.edge_weight(e));
      }
    }
  } else {
    for (std::size_t p = a + 1; p-- > 0;) {
      if (dist[p] == kNegInf || s(p) > s_max) continue;
      const auto [e0, e1] = g_.in_range(p);
      for (std::size_t e = e0; e < e1; ++e) {
        const auto q = static_cast<std::size_t>(g_.edge_from(e));
        dist[q] = std::max(dist[q], dist[p] + g_.edge_weight(g_.redge_index(e)));
      }
    }
  }
  return dist;
}

std::vector<std::int32_t> BandedSynthesizer::surface_band(double a) const {
  const Chart& chart = st_.chart();
  std::vector<std::int32_t> out;
  for (int ix = 0; ix < chart.nx; ++ix) {
    std::int32_t prev = -1;
    const int it0 = dir_ > 0 ? 0 : chart.nt - 1;
    for (int k = 0; k < chart.nt; ++k) {
      const int it = it0 + dir_ * k;
      const std::int32_t n = st_.node_at(it, ix);
      if (n < 0) {
        prev = -1;
        continue;
      }
      if (s(static_cast<std::size_t>(n)) >= a) {
        if (prev >= 0 && s(static_cast<std::size_t>(prev)) < a) out.push_back(n);
        break;
      }
      prev = n;
    }
  }
  return out;
}

FatConeCovering BandedSynthesizer::band_covering(int a) const {
  const auto targets = surface_band(static_cast<double>(a));
  if (targets.empty())
    throw SynthesisError("band covering failed", "level " + std::to_string(a) + " has no crossing nodes");
  GreedyCoverer cov{
      st_, [&](std::int32_t p, std::int32_t x) {
        return in_dir_chron(static_cast<std::size_t>(p), static_cast<std::size_t>(x));
      },
      [&](std::int32_t x, int depth, int shift) -> std::int32_t {
        // Keep the outer apex inside the band [a-1, a] and above the apex floor.
        for (int d = depth; d >= 1; --d) {
          for (int sh = shift; sh >= 0; --sh) {
            const std::int32_t n =
                st_.node_at(st_.node_it(static_cast<std::size_t>(x)) - dir_ * d,
                            st_.node_ix(static_cast<std::size_t>(x)) + sh);
            if (n < 0) continue;
            const double sn = s(static_cast<std::size_t>(n));
            if (sn < a - 1.0 - 1e-9 || sn < apex_floor_) continue;
            return n;
          }
        }
        return -1;
      },
      opt_.cover_depth_rows};
  return cov.run(targets);
}

namespace {

struct ApexBump {
  std::int32_t node;
  int depth_rows; // certification depth
  double eta0;
  std::vector<double> tau;
  ScalarField j;
};

} // namespace

ScalarField BandedSynthesizer::steep_cone_function(int a, const ConePair& pair, BandTrace* trace) const {
  const double s_top = a + 1.0;
  const auto outer = static_cast<std::size_t>(pair.outer);
  const auto inner = static_cast<std::size_t>(pair.inner);
  const std::size_t n = g_.node_count();
  const double target = opt_.margin_target * (1.0 + opt_.margin_slack);

  // Margin region J(outer, level a+1) and the value band above it.
  std::vector<std::int32_t> region;
  const BitMatrix& future = dir_ > 0 ? g_.jplus() : g_.jminus();
  future.for_each_in_row(outer, [&](std::size_t x) {
    if (s(x) <= s_top + 1e-9) region.push_back(static_cast<std::int32_t>(x));
  });
  std::vector<std::int32_t> value_band;
  for (const std::int32_t x : surface_band(s_top))
    if (in_dir_future(outer, static_cast<std::size_t>(x))) value_band.push_back(x);

  std::vector<std::int32_t> targets = region;
  targets.insert(targets.end(), value_band.begin(), value_band.end());
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  // Coverage bookkeeping: a bump at y certifies x when x sits deep inside
  // y's cone (bounded slope, at least the bump's own depth below x). The
  // slope bound keeps x away from the bump's null facets, where the directed
  // derivative of the graph proper time degenerates.
  auto in_cert_range = [&](const ApexBump& b, std::size_t x) {
    const int drow = dir_ * (st_.node_it(x) - st_.node_it(static_cast<std::size_t>(b.node)));
    if (drow < b.depth_rows) return false;
    const int dcol = st_.chart().col_delta(st_.node_ix(static_cast<std::size_t>(b.node)), st_.node_ix(x));
    if (std::abs(dcol) * st_.chart().hx() > opt_.cover_slope * drow * st_.chart().ht() + 1e-12) return false;
    return b.tau[x] > 0.0;
  };
  std::vector<double> covered_by_depth(n, 0.0); // 0 = uncovered
  auto certify = [&](const ApexBump& b) {
    for (const std::int32_t xn : targets) {
      const auto x = static_cast<std::size_t>(xn);
      if (covered_by_depth[x] > 0.0) continue;
      if (in_cert_range(b, x)) covered_by_depth[x] = b.tau[x];
    }
  };

  auto make_bump = [&](std::int32_t node, int depth) {
    ApexBump b;
    b.node = node;
    b.depth_rows = depth;
    const double scale = std::max(1, depth) * ht_proper_;
    b.eta0 = scale * scale;
    b.tau = tau_from(node, s_top + 0.95);
    b.j = ScalarField(n);
    for (std::size_t q = 0; q < n; ++q)
      if (b.tau[q] > 0.0) b.j[q] = std::exp(-b.eta0 / (b.tau[q] * b.tau[q]));
    return b;
  };

  std::set<std::int32_t> apex_nodes;
  std::vector<ApexBump> bumps;
  auto add_apex = [&](std::int32_t node, int depth) -> bool {
    if (node < 0 || apex_nodes.count(node)) return false;
    apex_nodes.insert(node);
    bumps.push_back(make_bump(node, depth));
    certify(bumps.back());
    return true;
  };

  ScalarField h(n);
  double max_constant = 0.0;

  // Sub-band induction from the inner apex up to the target level.
  const double s_lo = s(inner);
  const double sub_width = std::max(0.5 * opt_.sub_band_rows / static_cast<double>(opt_.band_rows), 1e-3);
  const int m = std::max(1, static_cast<int>(std::ceil((s_top - s_lo) / sub_width)));

  std::vector<ApexBump> pending;
  add_apex(pair.inner, 1);
  {
    // The inner apex seeds the first sub-band.
    pending.push_back(bumps.back());
  }
  for (int k = 1; k <= m + 1; ++k) {
    const double lvl = k <= m ? s_lo + k * (s_top - s_lo) / m : s_top + 0.95;
    // Propose apexes under still-uncovered targets of this slab.
    std::vector<ApexBump> fresh = std::move(pending);
    pending.clear();
    for (const std::int32_t xn : targets) {
      const auto x = static_cast<std::size_t>(xn);
      if (covered_by_depth[x] > 0.0 || s(x) > lvl) continue;
      std::int32_t y = -1;
      int depth_used = 0;
      for (int d = opt_.cover_depth_rows; d >= 1 && y < 0; --d) {
        const std::int32_t cand = node_toward_past(x, d);
        if (cand < 0) continue;
        if (!in_dir_future(inner, static_cast<std::size_t>(cand))) continue;
        if (s(static_cast<std::size_t>(cand)) < apex_floor_) continue;
        y = cand;
        depth_used = d;
      }
      if (y < 0) {
        y = pair.inner; // always admissible; certifies the near column
        depth_used = 1;
      }
      if (y >= 0 && !apex_nodes.count(y)) {
        apex_nodes.insert(y);
        bumps.push_back(make_bump(y, depth_used));
        certify(bumps.back());
        fresh.push_back(bumps.back());
      }
    }
    if (fresh.empty()) continue;

    ScalarField add(n);
    for (const ApexBump& b : fresh)
      for (std::size_t q = 0; q < n; ++q) add[q] += b.j[q];

    // Constant for this slab: enforce the margin on what the new bumps
    // certify (their gradients are timelike there).
    std::vector<std::int32_t> K;
    for (const ApexBump& b : fresh)
      for (const std::int32_t xn : region)
        if (in_cert_range(b, static_cast<std::size_t>(xn))) K.push_back(xn);
    std::sort(K.begin(), K.end());
    K.erase(std::unique(K.begin(), K.end()), K.end());
    double c = 1.0;
    if (!K.empty()) c = pick_constant(st_, h, add, K, target);
    if (c > opt_.constant_cap)
      throw SynthesisError("cone synthesis failed", "constant escalation exceeded the cap in band " +
                                                        std::to_string(a));
    max_constant = std::max(max_constant, c);
    for (std::size_t q = 0; q < n; ++q) h[q] += c * add[q];
  }

  for (const std::int32_t xn : region)
    if (!(covered_by_depth[static_cast<std::size_t>(xn)] > 0.0))
      throw SynthesisError("cone synthesis failed",
                           "margin region node " + std::to_string(xn) + " is not covered in band " +
                               std::to_string(a));

  // Value floor on the target surface band inside the outer cone.
  double v_min = std::numeric_limits<double>::infinity();
  for (const std::int32_t x : value_band) v_min = std::min(v_min, h[static_cast<std::size_t>(x)]);
  if (!value_band.empty() && v_min < 1.0 + opt_.value_slack) {
    const double f = (1.0 + 2.0 * opt_.value_slack) / std::max(v_min, 1e-300);
    if (f > opt_.constant_cap) throw SynthesisError("cone synthesis failed", "value escalation exceeded the cap");
    for (double& v : h.values) v *= f;
    max_constant = std::max(max_constant, f);
  }

  // Margin floor on the whole margin region.
  auto min_margin_over = [&](const std::vector<std::int32_t>& nodes) {
    double mm = std::numeric_limits<double>::infinity();
    for (const std::int32_t xn : nodes) {
      const auto x = static_cast<std::size_t>(xn);
      const Gradient2 gh = local_gradient(st_, h, x);
      if (!gh.valid) continue;
      mm = std::min(mm, -lorentz_pair(st_, x, gh, gh));
    }
    return mm;
  };
  double mm = min_margin_over(region);
  if (mm <= 0.0)
    throw SynthesisError("cone synthesis failed",
                         "gradient is not timelike on the margin region of band " + std::to_string(a));
  if (mm < target) {
    const double f = std::sqrt((target + 0.05) / mm);
    if (f > opt_.constant_cap) throw SynthesisError("cone synthesis failed", "margin escalation exceeded the cap");
    for (double& v : h.values) v *= f;
    max_constant = std::max(max_constant, f);
    mm = min_margin_over(region);
  }

  // Band cutoff keeps the support below level a+2; the topmost band is left
  // uncut so the sum stays monotone up to the chart boundary.
  if (!is_last_band(a)) {
    for (std::size_t q = 0; q < n; ++q) {
      if (h[q] == 0.0) continue;
      h[q] *= 1.0 - smoothstep5((s(q) - (s_top + 0.25)) / 0.5);
    }
  }

  // Property checks: support, surface value, almost-temporality below the
  // target level, margin on the cone region.
  const double h_max = *std::max_element(h.values.begin(), h.values.end());
  const double floor = opt_.zero_floor_rel * std::max(h_max, 1e-300);
  for (std::size_t q = 0; q < n; ++q) {
    if (h[q] == 0.0) continue;
    if (!in_dir_future(inner, q) || s(q) > a + 2.0)
      throw SynthesisError("cone property failed",
                           "support escapes the inner cone band at node " + std::to_string(q));
  }
  for (const std::int32_t x : value_band)
    if (!(h[static_cast<std::size_t>(x)] > 1.0))
      throw SynthesisError("cone property failed", "surface value <= 1 at node " + std::to_string(x));
  for (const std::int32_t xn : region) {
    const auto x = static_cast<std::size_t>(xn);
    if (std::abs(h[x]) <= floor) continue;
    const Gradient2 gh = local_gradient(st_, h, x);
    if (!gh.valid) continue;
    const double e2 = gh.dt * gh.dt + gh.dx * gh.dx;
    if (e2 <= floor * floor) continue;
    const double q = lorentz_pair(st_, x, gh, gh);
    const bool causal = q <= 1e-6 * e2;
    const bool past = dir_ * gh.dt > -1e-6 * std::sqrt(e2);
    if (!(causal && past))
      throw SynthesisError("cone property failed",
                           "gradient not past-causal below the target level at node " + std::to_string(xn));
  }
  if (!(mm > opt_.margin_target))
    throw SynthesisError("cone property failed", "margin " + fmt_g6(mm) + " not above target on the cone region");

  if (trace) {
    trace->bumps += bumps.size();
    trace->max_constant = std::max(trace->max_constant, max_constant);
  }
  return h;
}

ScalarField BandedSynthesizer::globalize(int a, const FatConeCovering& covering, const ScalarField* base,
                                         BandTrace* trace) const {
  const std::size_t n = g_.node_count();
  const double target = opt_.margin_target * (1.0 + opt_.margin_slack);
  const double mult = std::abs(a) + 1.0;

  BandTrace bt;
  bt.band = a;
  bt.direction = dir_;
  bt.pairs = covering.pairs.size();

  ScalarField h(n);
  ScalarField fbase(n);
  if (base) fbase = *base;

  std::vector<std::vector<std::int32_t>> regions;
  for (const ConePair& pair : covering.pairs) {
    const ScalarField cone = steep_cone_function(a, pair, &bt);
    // The cone's margin region: its own certified set.
    std::vector<std::int32_t> region;
    const BitMatrix& future = dir_ > 0 ? g_.jplus() : g_.jminus();
    future.for_each_in_row(static_cast<std::size_t>(pair.outer), [&](std::size_t x) {
      if (s(x) <= a + 1.0 + 1e-9) region.push_back(static_cast<std::int32_t>(x));
    });
    regions.push_back(region);

    ScalarField running(n);
    for (std::size_t q = 0; q < n; ++q) running[q] = fbase[q] + h[q];
    const double c = pick_constant(st_, running, cone, region, target);
    if (mult * c > opt_.constant_cap)
      throw SynthesisError("globalize failed", "constant cap exceeded in band " + std::to_string(a));
    bt.max_constant = std::max(bt.max_constant, mult * c);
    for (std::size_t q = 0; q < n; ++q) h[q] += mult * c * cone[q];
  }

  // Value floor over the full target surface band: beats both the band label
  // and the growth bound used by the final field.
  const auto sband = surface_band(a + 1.0);
  double v_min = std::numeric_limits<double>::infinity();
  for (const std::int32_t x : sband) v_min = std::min(v_min, h[static_cast<std::size_t>(x)]);
  const double v_target = (std::abs(a) + 2.0) * (1.0 + opt_.value_slack);
  double scale = 1.0;
  if (v_min < v_target) scale = v_target / std::max(v_min, 1e-300);
  if (scale > opt_.constant_cap) throw SynthesisError("globalize failed", "value scale exceeded the cap");
  if (scale != 1.0)
    for (double& v : h.values) v *= scale;
  bt.value_scale = scale;

  // Combined margin with the previous band on the union of cone regions.
  double mm = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 6; ++attempt) {
    mm = std::numeric_limits<double>::infinity();
    ScalarField sum(n);
    for (std::size_t q = 0; q < n; ++q) sum[q] = fbase[q] + h[q];
    for (const auto& region : regions) {
      for (const std::int32_t xn : region) {
        const auto x = static_cast<std::size_t>(xn);
        const Gradient2 gs = local_gradient(st_, sum, x);
        if (!gs.valid) continue;
        mm = std::min(mm, -lorentz_pair(st_, x, gs, gs));
      }
    }
    if (mm >= opt_.margin_target) break;
    for (double& v : h.values) v *= 2.0;
    bt.max_constant *= 2.0;
    if (bt.max_constant > opt_.constant_cap)
      throw SynthesisError("globalize failed", "cross-band margin escalation exceeded the cap in band " +
                                                   std::to_string(a) + " (margin " + fmt_g6(mm) + ")");
  }
  bt.min_margin = mm;

  double sv = std::numeric_limits<double>::infinity();
  for (const std::int32_t x : sband) sv = std::min(sv, h[static_cast<std::size_t>(x)]);
  bt.surface_value = sv;
  if (!(sv > std::abs(a) + 1.0))
    throw SynthesisError("globalize failed", "surface value does not exceed |a|+1 in band " + std::to_string(a));

  if (trace) *trace = bt;
  return h;
}

ScalarField BandedSynthesizer::half_sum(SynthesisTrace& trace, std::vector<ScalarField>* band_fields) const {
  const std::size_t n = g_.node_count();
  ScalarField total(n);
  ScalarField prev;
  for (int a = 0; a < n_bands_; ++a) {
    BandTrace bt;
    const FatConeCovering covering = band_covering(a);
    ScalarField h = globalize(a, covering, a > 0 ? &prev : nullptr, &bt);
    trace.bands.push_back(bt);
    for (std::size_t q = 0; q < n; ++q) total[q] += h[q];
    if (band_fields) band_fields->push_back(h);
    prev = std::move(h);
  }
  return total;
}

// ---------------------------------------------------------------------------
// steep_temporal
// ---------------------------------------------------------------------------

SteepResult steep_temporal(const CausalGraph& graph, const ScalarField& t_ref, const SteepOptions& opt) {
  const SampledSpacetime& st = graph.spacetime();
  const TimeFunctionReport pre = verify_time_function(graph, t_ref);
  if (pre.violations != 0)
    throw InputError("steep_temporal requires a verified time function (violations: " +
                     std::to_string(pre.violations) + ")");

  SteepResult res;
  res.bands = build_banded_time(graph, t_ref, opt.band_rows);
  res.tol_h = default_tol_h(st, opt);

  BandedSynthesizer up(graph, res.bands.t, res.bands.n_up, +1, opt);
  BandedSynthesizer down(graph, res.bands.t, res.bands.n_down, -1, opt);
  ScalarField plus = up.half_sum(res.trace);
  ScalarField minus = down.half_sum(res.trace);

  const std::size_t n = graph.node_count();
  res.field = ScalarField(n);
  for (std::size_t q = 0; q < n; ++q) res.field[q] = plus[q] - minus[q];

  const ScalarField& tb = res.bands.t;
  res.interior.assign(n, 0);
  for (std::size_t q = 0; q < n; ++q)
    if (tb[q] >= -res.bands.n_down - 1e-9 && tb[q] <= res.bands.n_up + 1e-9) res.interior[q] = 1;

  for (int attempt = 0;; ++attempt) {
    const ScalarField margin = steepness_margin(st, res.field);
    double mm = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < n; ++q)
      if (res.interior[q] && !std::isnan(margin[q])) mm = std::min(mm, margin[q]);
    res.min_interior_margin = mm;
    const TimeFunctionReport tf = verify_time_function(graph, res.field);
    res.monotonicity_violations = tf.violations;

    bool band_bound_ok = true;
    bool abs_bound_ok = true;
    for (std::size_t q = 0; q < n; ++q) {
      if (!res.interior[q]) continue;
      if (tb[q] >= 1.0 && !(res.field[q] > std::floor(tb[q]) + 1.0)) band_bound_ok = false;
      if (tb[q] <= -1.0 && !(-res.field[q] > std::floor(-tb[q]) + 1.0)) band_bound_ok = false;
      if (!(std::abs(res.field[q]) > std::abs(tb[q]) / 2.0 - 1.0)) abs_bound_ok = false;
    }

    if (mm >= 1.0 - res.tol_h && tf.violations == 0 && band_bound_ok && abs_bound_ok) break;
    if (attempt >= 2) {
      std::string what = "steep synthesis post-checks failed:";
      if (mm < 1.0 - res.tol_h) what += " margin " + fmt_g6(mm);
      if (tf.violations) what += " monotonicity_violations " + std::to_string(tf.violations);
      if (!band_bound_ok) what += " band_bound";
      if (!abs_bound_ok) what += " abs_bound";
      throw SynthesisError("steep synthesis failed", what);
    }
    for (std::size_t q = 0; q < n; ++q) res.field[q] *= 2.0;
    res.trace.notes.push_back("post-check escalation x2");
  }
  return res;
}

// ---------------------------------------------------------------------------
// steep_bounded
// ---------------------------------------------------------------------------

namespace {

// One side of the bounded pair: base + ramped cone pieces dominating f on the
// surface. direction +1 builds the future side.
ScalarField bounded_side(const CausalGraph& graph, const SteepResult& base, const SurfaceGraph& surface,
                         const std::vector<double>& f, int dir, const SteepOptions& opt, SynthesisTrace& trace) {
  const SampledSpacetime& st = graph.spacetime();
  const std::size_t n = graph.node_count();
  const double depth_t = (opt.cover_depth_rows + 1) * st.chart().ht();

  // Time-dual coverings reuse the future machinery on the reflected chart:
  // here the greedy coverer works directly with the directed closures.
  const BitMatrix& chron = dir > 0 ? graph.iplus() : graph.iminus();
  const auto targets = snapped_surface_nodes(st, surface);
  GreedyCoverer coverer{
      st,
      [&](std::int32_t p, std::int32_t x) {
        return dir > 0 ? chron.test(static_cast<std::size_t>(p), static_cast<std::size_t>(x))
                       : chron.test(static_cast<std::size_t>(p), static_cast<std::size_t>(x));
      },
      [&](std::int32_t x, int depth, int shift) -> std::int32_t {
        const int it = st.node_it(static_cast<std::size_t>(x)) - dir * depth;
        for (int sh = shift; sh >= 0; --sh) {
          const std::int32_t cand = st.node_at(it, st.node_ix(static_cast<std::size_t>(x)) + sh);
          if (cand >= 0) return cand;
        }
        return -1;
      },
      std::max(1, static_cast<int>(std::lround(depth_t / st.chart().ht())))};
  const FatConeCovering covering = coverer.run(targets);

  const double tau_scale = depth_t;
  ScalarField side = base.field;
  double max_c = 1.0;
  for (const ConePair& pair : covering.pairs) {
    const auto tau = dir > 0 ? graph.proper_time_from(static_cast<std::size_t>(pair.inner))
                             : graph.proper_time_to(static_cast<std::size_t>(pair.inner));
    // Compact piece C_i = (outer cone) x surface; its ramp threshold.
    double m_i = std::numeric_limits<double>::infinity();
    double f_need = -std::numeric_limits<double>::infinity();
    double base_min = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> piece;
    for (const std::int32_t xn : targets) {
      const auto x = static_cast<std::size_t>(xn);
      if (!chron.test(static_cast<std::size_t>(pair.outer), x)) continue;
      piece.push_back(x);
      m_i = std::min(m_i, tau[x] / tau_scale);
      f_need = std::max(f_need, f[static_cast<std::size_t>(st.node_ix(x))]);
      base_min = std::min(base_min, dir * base.field[x]);
    }
    if (piece.empty()) continue;
    if (!(m_i > 0.0))
      throw SynthesisError("bounded synthesis failed", "surface node touches the cone boundary of its apex");
    const double s_floor = m_i; // splice_ramp is the identity from m_i on
    const double c = std::max(1.0, (f_need + 1.0 - base_min) / s_floor);
    max_c = std::max(max_c, c);
    for (std::size_t q = 0; q < n; ++q) {
      if (!(tau[q] > 0.0)) continue;
      side[q] += dir * c * splice_ramp(tau[q] / tau_scale, m_i - 1.0, m_i);
    }
  }
  trace.notes.push_back(std::string("bounded side ") + (dir > 0 ? "+" : "-") + ": pairs=" +
                        std::to_string(covering.pairs.size()) + " max_constant=" + fmt_g6(max_c));

  for (const std::int32_t xn : targets) {
    const auto x = static_cast<std::size_t>(xn);
    if (!(dir * side[x] > f[static_cast<std::size_t>(st.node_ix(x))]))
      throw SynthesisError("bounded synthesis failed", "surface bound not met at node " + std::to_string(xn));
  }
  return side;
}

} // namespace

BoundedPair steep_bounded(const CausalGraph& graph, const SurfaceGraph& s_plus, const SurfaceGraph& s_minus,
                          const std::vector<double>& f_plus, const std::vector<double>& f_minus,
                          const ScalarField& t_ref, const SteepOptions& opt) {
  const SampledSpacetime& st = graph.spacetime();
  // Precondition: s_plus strictly above s_minus chronologically.
  for (int ix = 0; ix < st.chart().nx; ++ix)
    if (!(s_plus.u[ix] > s_minus.u[ix]))
      throw InputError("steep_bounded requires the upper surface inside the chronological future of the lower one");

  BoundedPair out;
  SteepResult base = steep_temporal(graph, t_ref, opt);
  out.tol_h = base.tol_h;
  out.trace = base.trace;
  out.t2_plus = bounded_side(graph, base, s_plus, f_plus, +1, opt, out.trace);
  out.t2_minus = bounded_side(graph, base, s_minus, f_minus, -1, opt, out.trace);
  out.base = std::move(base.field);
  out.bands = std::move(base.bands);
  out.interior = std::move(base.interior);

  for (const ScalarField* fptr : {&out.t2_plus, &out.t2_minus}) {
    const TimeFunctionReport tf = verify_time_function(graph, *fptr);
    if (tf.violations != 0)
      throw SynthesisError("bounded synthesis failed",
                           "monotonicity violations: " + std::to_string(tf.violations));
  }
  return out;
}

// ---------------------------------------------------------------------------
// signed_distance
// ---------------------------------------------------------------------------

ScalarField signed_distance(const SampledSpacetime& st, const SurfaceGraph& surface) {
  const Chart& chart = st.chart();
  ScalarField delta(st.node_count());
  for (int ix = 0; ix < chart.nx; ++ix) {
    // Normal-line correction: the vertical proper-time gap underestimates the
    // Lorentzian distance of a tilted plane by sqrt(1 - slope^2).
    const int ixm = chart.wrap_ix(ix - 1);
    const int ixp = chart.wrap_ix(ix + 1);
    double du;
    if (ixm >= 0 && ixp >= 0)
      du = (surface.u[ixp] - surface.u[ixm]) / (2.0 * chart.hx());
    else if (ixp >= 0)
      du = (surface.u[ixp] - surface.u[ix]) / chart.hx();
    else
      du = (surface.u[ix] - surface.u[static_cast<std::size_t>(ixm)]) / chart.hx();
    const double u = surface.u[ix];
    const int it_s = static_cast<int>(std::lround((u - chart.t_lo) / chart.ht()));
    const std::int32_t ns = st.node_at(it_s, ix);
    if (ns < 0) throw InputError("surface exits the included region at column " + std::to_string(ix));
    const Sym2& gs = st.metric(static_cast<std::size_t>(ns));
    const double gamma = du * std::sqrt(gs.xx / -gs.tt);
    const double normal_factor = 1.0 / std::sqrt(1.0 - gamma * gamma);

    for (int it = 0; it < chart.nt; ++it) {
      const std::int32_t n = st.node_at(it, ix);
      if (n < 0) continue;
      const double t = chart.t_coord(it);
      // Proper-time integral along the column between u and t (trapezoid in
      // the conformal factor).
      const double a = std::min(u, t), b = std::max(u, t);
      double acc = 0.0;
      int k0 = static_cast<int>(std::floor((a - chart.t_lo) / chart.ht()));
      int k1 = static_cast<int>(std::ceil((b - chart.t_lo) / chart.ht()));
      k0 = std::max(k0, 0);
      k1 = std::min(k1, chart.nt - 1);
      for (int k = k0; k < k1; ++k) {
        const double c0 = std::max(a, chart.t_coord(k));
        const double c1 = std::min(b, chart.t_coord(k + 1));
        if (c1 <= c0) continue;
        const std::int32_t n0 = st.node_at(k, ix);
        const std::int32_t n1 = st.node_at(k + 1, ix);
        const double w0 = n0 >= 0 ? std::sqrt(-st.metric(static_cast<std::size_t>(n0)).tt) : 0.0;
        const double w1 = n1 >= 0 ? std::sqrt(-st.metric(static_cast<std::size_t>(n1)).tt)
                                  : w0;
        acc += 0.5 * (w0 + w1) * (c1 - c0);
      }
      delta[static_cast<std::size_t>(n)] = (t >= u ? acc : -acc) * normal_factor;
    }
  }
  return delta;
}

// ---------------------------------------------------------------------------
// adapted_temporal
// ---------------------------------------------------------------------------

AdaptedResult adapted_temporal(const CausalGraph& graph, const SurfaceGraph& surface, const SurfaceGraph& s_minus,
                               const SurfaceGraph& s_plus, const std::vector<double>& f_minus,
                               const std::vector<double>& f_plus, const ScalarField& t_ref,
                               const AdaptedOptions& opt) {
  const SampledSpacetime& st = graph.spacetime();
  const Chart& chart = st.chart();
  const std::size_t n = graph.node_count();
  for (int ix = 0; ix < chart.nx; ++ix)
    if (!(s_minus.u[ix] < surface.u[ix] && surface.u[ix] < s_plus.u[ix]))
      throw InputError("adapted_temporal requires s_minus < surface < s_plus column-wise");

  AdaptedResult res;
  res.tol_h = default_tol_h(st, opt.steep);
  res.delta = signed_distance(st, surface);

  const double ht_p = median_proper_row_height(st);
  const double off = opt.collar_rows * ht_p;
  const double gain = opt.delta_gain;

  // Collar profile: exactly -1 below the lower collar surface, exactly +1
  // above the upper one, steep across the surface.
  res.theta = ScalarField(n);
  ScalarField theta_plus(n), theta_minus(n);
  for (std::size_t q = 0; q < n; ++q) {
    const double d = res.delta[q];
    const double tp = smoothstep5((d + off) / off);
    const double tm = smoothstep5(d / off) - 1.0;
    theta_plus[q] = tp;
    theta_minus[q] = tm;
    const double dh = saturate_below(gain * d);
    const double num = 2.0 * (dh + 1.0) * tp;
    const double den = (dh + 1.0) * tp - tm;
    res.theta[q] = num / den - 1.0;
  }

  // Collar construction sanity: the collar band must fit inside the chart.
  {
    double dmin = std::numeric_limits<double>::infinity(), dmax = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < n; ++q) {
      dmin = std::min(dmin, res.delta[q]);
      dmax = std::max(dmax, res.delta[q]);
    }
    const double need = (opt.anchor_rows + opt.steep.band_rows * 2 + opt.steep.cover_depth_rows + 1) * ht_p;
    if (dmax < need || -dmin < need)
      throw RangeError("collar construction failed: refine the grid or move the surface away from the chart "
                       "boundary (need " +
                       fmt_g6(need) + " of proper time on both sides)");
  }

  // Outer steep halves against the signed distance, anchored a few rows off
  // the surface so they vanish identically near it.
  const double band_h = opt.steep.band_rows * ht_p;
  const double anchor = opt.anchor_rows * ht_p;
  double dmax = -std::numeric_limits<double>::infinity(), dmin = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < n; ++q) {
    dmax = std::max(dmax, res.delta[q]);
    dmin = std::min(dmin, res.delta[q]);
  }
  const int n_up = static_cast<int>(std::floor((dmax - anchor) / band_h)) - 1;
  const int n_down = static_cast<int>(std::floor((-dmin - anchor) / band_h)) - 1;
  if (n_up < 1 || n_down < 1) throw RangeError("collar construction failed: no room for the outer steep bands");

  ScalarField s_up_ref(n), s_down_ref(n);
  for (std::size_t q = 0; q < n; ++q) {
    s_up_ref[q] = (res.delta[q] - anchor) / band_h;
    s_down_ref[q] = (res.delta[q] + anchor) / band_h; // direction -1 negates
  }
  const double floor_up = (0.4 * anchor - anchor) / band_h;
  BandedSynthesizer up(graph, s_up_ref, n_up, +1, opt.steep, floor_up);
  BandedSynthesizer dn(graph, s_down_ref, n_down, -1, opt.steep, floor_up);
  ScalarField sum_up = up.half_sum(res.trace);
  ScalarField sum_dn = dn.half_sum(res.trace);

  // Value boosts: the halves also carry the outer-surface bounds.
  auto boost_for = [&](const SurfaceGraph& sg, const std::vector<double>& f, const ScalarField& half) {
    double v = std::numeric_limits<double>::infinity();
    double need = -std::numeric_limits<double>::infinity();
    for (const std::int32_t xn : snapped_surface_nodes(st, sg)) {
      const auto x = static_cast<std::size_t>(xn);
      v = std::min(v, half[x]);
      need = std::max(need, f[static_cast<std::size_t>(st.node_ix(x))]);
    }
    if (!(v > 0.0))
      throw SynthesisError("adapted synthesis failed", "outer surface is inside the anchor collar");
    return std::max(1.0, (need + 1.0) / v);
  };
  const double boost_up = boost_for(s_plus, f_plus, sum_up);
  const double boost_dn = boost_for(s_minus, f_minus, sum_dn);

  res.field = ScalarField(n);
  for (std::size_t q = 0; q < n; ++q)
    res.field[q] = res.theta[q] + boost_up * sum_up[q] - boost_dn * sum_dn[q];
  res.trace.notes.push_back("adapted boosts: +" + fmt_g6(boost_up) + " / -" + fmt_g6(boost_dn));

  // --- post-checks -----------------------------------------------------------
  // Zero on the surface at column-interpolated points.
  double max_surf = 0.0;
  for (int ix = 0; ix < chart.nx; ++ix) {
    const double u = surface.u[ix];
    const int it0 = static_cast<int>(std::floor((u - chart.t_lo) / chart.ht()));
    const std::int32_t n0 = st.node_at(it0, ix);
    const std::int32_t n1 = st.node_at(it0 + 1, ix);
    if (n0 < 0 || n1 < 0) continue;
    const double lam = (u - chart.t_coord(it0)) / chart.ht();
    const double val = (1.0 - lam) * res.field[static_cast<std::size_t>(n0)] +
                       lam * res.field[static_cast<std::size_t>(n1)];
    max_surf = std::max(max_surf, std::abs(val));
  }
  res.max_surface_value = max_surf;
  const double surf_tol = std::max(1e-6, 2.0 * gain * chart.ht() * chart.ht());
  if (max_surf > surf_tol)
    throw SynthesisError("adapted synthesis failed", "field does not vanish on the surface (max " +
                                                         fmt_g6(max_surf) + ")");

  // Interior margin.
  res.interior.assign(n, 0);
  for (std::size_t q = 0; q < n; ++q)
    if (res.delta[q] >= -(n_down * band_h + anchor) && res.delta[q] <= n_up * band_h + anchor) res.interior[q] = 1;
  const ScalarField margin = steepness_margin(st, res.field);
  double mm = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < n; ++q)
    if (res.interior[q] && !std::isnan(margin[q])) mm = std::min(mm, margin[q]);
  res.min_interior_margin = mm;
  if (!(mm >= 1.0 - res.tol_h))
    throw SynthesisError("adapted synthesis failed", "interior margin " + fmt_g6(mm));

  const TimeFunctionReport tf = verify_time_function(graph, res.field);
  res.monotonicity_violations = tf.violations;
  if (tf.violations != 0)
    throw SynthesisError("adapted synthesis failed",
                         "monotonicity violations: " + std::to_string(tf.violations));

  // Zero level set against the surface.
  const LevelSet zero = extract_level_set(st, res.field, 0.0);
  res.level_zero_hausdorff = level_set_hausdorff(st, zero, surface);
  if (!(res.level_zero_hausdorff <= 2.0 * chart.ht()))
    throw SynthesisError("adapted synthesis failed",
                         "zero level set drifts from the surface by " + fmt_g6(res.level_zero_hausdorff));

  // Growth bounds against the banded reference and the surface bounds.
  const BandedTime ref_bands = build_banded_time(graph, t_ref, opt.steep.band_rows);
  for (std::size_t q = 0; q < n; ++q) {
    const double above = res.delta[q];
    if (above > 0.0 && st.node_t(q) > s_plus.u[st.node_ix(q)]) {
      if (!(res.field[q] > ref_bands.t[q] / 2.0 - 2.0))
        throw SynthesisError("adapted synthesis failed", "future growth bound fails at node " + std::to_string(q));
    }
    if (above < 0.0 && st.node_t(q) < s_minus.u[st.node_ix(q)]) {
      if (!(-res.field[q] > -ref_bands.t[q] / 2.0 - 2.0))
        throw SynthesisError("adapted synthesis failed", "past growth bound fails at node " + std::to_string(q));
    }
  }
  for (const std::int32_t xn : snapped_surface_nodes(st, s_plus)) {
    const auto x = static_cast<std::size_t>(xn);
    if (!(res.field[x] > f_plus[static_cast<std::size_t>(st.node_ix(x))]))
      throw SynthesisError("adapted synthesis failed", "upper surface bound fails at node " + std::to_string(xn));
  }
  for (const std::int32_t xn : snapped_surface_nodes(st, s_minus)) {
    const auto x = static_cast<std::size_t>(xn);
    if (!(-res.field[x] > f_minus[static_cast<std::size_t>(st.node_ix(x))]))
      throw SynthesisError("adapted synthesis failed", "lower surface bound fails at node " + std::to_string(xn));
  }
  return res;
}

} // namespace tempora
