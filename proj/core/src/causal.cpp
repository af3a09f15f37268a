#include "tempora/causal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tempora/errors.hpp"
#include "tempora/util.hpp"

namespace tempora {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

CausalGraph::CausalGraph(const SampledSpacetime& st, int stencil_radius) : st_(&st), radius_(stencil_radius) {
  if (stencil_radius < 1) throw InputError("stencil radius must be >= 1");
  const Chart& chart = st.chart();
  if (chart.periodic && chart.nx <= 2 * stencil_radius)
    throw InputError("circle slice needs more than 2*radius columns");

  n_ = st.node_count();
  offsets_.assign(n_ + 1, 0);

  const double ht = chart.ht();
  const double hx = chart.hx();
  const int r = stencil_radius;

  // Two passes: count, then fill.
  auto visit_edges = [&](std::size_t p, auto&& fn) {
    const int it = st.node_it(p);
    const int ix = st.node_ix(p);
    for (int dt = 1; dt <= r; ++dt) {
      for (int dx = -r; dx <= r; ++dx) {
        const std::int32_t q = st.node_at(it + dt, ix + dx);
        if (q < 0) continue;
        const Sym2 g = Sym2::midpoint(st.metric(p), st.metric(q));
        const double dvt = dt * ht;
        const double dvx = dx * hx;
        const double quad = g.quadratic(dvt, dvx);
        const CausalClass cls = classify(g, dvt, dvx);
        if (cls != CausalClass::Timelike && cls != CausalClass::Lightlike) continue;
        // Future check against the midpoint orientation.
        const auto& Xp = st.orientation(p);
        const auto& Xq = st.orientation(static_cast<std::size_t>(q));
        const double Xt = 0.5 * (Xp[0] + Xq[0]);
        const double Xx = 0.5 * (Xp[1] + Xq[1]);
        if (g.eval(dvt, dvx, Xt, Xx) >= 0.0) continue;
        const double euclid2 = dvt * dvt + dvx * dvx;
        const bool timelike = -quad >= kTimelikeMargin * euclid2;
        const double w = quad < 0.0 ? std::sqrt(-quad) : 0.0;
        fn(q, timelike, w, std::abs(dvx) / dvt);
      }
    }
  };

  for (std::size_t p = 0; p < n_; ++p) {
    std::size_t deg = 0;
    visit_edges(p, [&](std::int32_t, bool, double, double) { ++deg; });
    offsets_[p + 1] = offsets_[p] + deg;
  }
  to_.resize(offsets_[n_]);
  weight_.resize(offsets_[n_]);
  timelike_.resize(offsets_[n_]);
  for (std::size_t p = 0; p < n_; ++p) {
    std::size_t e = offsets_[p];
    visit_edges(p, [&](std::int32_t q, bool tl, double w, double slope) {
      to_[e] = q;
      weight_[e] = w;
      timelike_[e] = tl ? 1 : 0;
      if (tl) ++timelike_count_;
      max_edge_slope_ = std::max(max_edge_slope_, slope);
      ++e;
    });
  }

  build_transpose();
  compute_topo();
}

CausalGraph CausalGraph::from_edge_list(
    std::size_t node_count, const std::vector<std::tuple<std::int32_t, std::int32_t, bool, double>>& edges) {
  CausalGraph g;
  g.n_ = node_count;
  g.offsets_.assign(node_count + 1, 0);
  for (const auto& [a, b, tl, w] : edges) {
    (void)b;
    (void)tl;
    (void)w;
    ++g.offsets_[static_cast<std::size_t>(a) + 1];
  }
  for (std::size_t p = 0; p < node_count; ++p) g.offsets_[p + 1] += g.offsets_[p];
  g.to_.resize(edges.size());
  g.weight_.resize(edges.size());
  g.timelike_.resize(edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [a, b, tl, w] : edges) {
    const std::size_t e = cursor[static_cast<std::size_t>(a)]++;
    g.to_[e] = b;
    g.weight_[e] = w;
    g.timelike_[e] = tl ? 1 : 0;
    if (tl) ++g.timelike_count_;
  }
  g.build_transpose();
  g.compute_topo();
  return g;
}

const SampledSpacetime& CausalGraph::spacetime() const {
  if (!st_) throw InputError("fixture graph has no spacetime attached");
  return *st_;
}

void CausalGraph::build_transpose() {
  roffsets_.assign(n_ + 1, 0);
  for (std::int32_t q : to_) ++roffsets_[static_cast<std::size_t>(q) + 1];
  for (std::size_t p = 0; p < n_; ++p) roffsets_[p + 1] += roffsets_[p];
  from_.resize(to_.size());
  redge_eidx_.resize(to_.size());
  std::vector<std::size_t> cursor(roffsets_.begin(), roffsets_.end() - 1);
  for (std::size_t p = 0; p < n_; ++p) {
    for (std::size_t e = offsets_[p]; e < offsets_[p + 1]; ++e) {
      const std::size_t slot = cursor[static_cast<std::size_t>(to_[e])]++;
      from_[slot] = static_cast<std::int32_t>(p);
      redge_eidx_[slot] = e;
    }
  }
}

void CausalGraph::compute_topo() {
  // Kahn's algorithm; ties resolved by ascending id for determinism.
  std::vector<std::size_t> indeg(n_, 0);
  for (std::int32_t q : to_) ++indeg[static_cast<std::size_t>(q)];
  std::vector<std::int32_t> ready;
  for (std::size_t p = 0; p < n_; ++p)
    if (indeg[p] == 0) ready.push_back(static_cast<std::int32_t>(p));
  topo_order_.clear();
  topo_order_.reserve(n_);
  std::size_t head = 0;
  while (head < ready.size()) {
    const std::int32_t p = ready[head++];
    topo_order_.push_back(p);
    for (std::size_t e = offsets_[p]; e < offsets_[p + 1]; ++e) {
      if (--indeg[static_cast<std::size_t>(to_[e])] == 0) ready.push_back(to_[e]);
    }
  }
  acyclic_ = topo_order_.size() == n_;
}

void CausalGraph::require_acyclic() const {
  if (!acyclic_) throw InputError("causality violation: the edge relation contains a cycle");
}

const BitMatrix& CausalGraph::jplus() const {
  if (!jplus_.empty()) return jplus_;
  require_acyclic();
  jplus_ = BitMatrix(n_, n_);
  // Reverse topological sweep: J+(p) = {p} + union of J+ over successors.
  for (std::size_t i = n_; i-- > 0;) {
    const auto p = static_cast<std::size_t>(topo_order_[i]);
    jplus_.set(p, p);
    for (std::size_t e = offsets_[p]; e < offsets_[p + 1]; ++e) jplus_.or_row(p, static_cast<std::size_t>(to_[e]));
  }
  return jplus_;
}

const BitMatrix& CausalGraph::jminus() const {
  if (!jminus_.empty()) return jminus_;
  require_acyclic();
  jminus_ = BitMatrix(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto q = static_cast<std::size_t>(topo_order_[i]);
    jminus_.set(q, q);
    for (std::size_t e = roffsets_[q]; e < roffsets_[q + 1]; ++e)
      jminus_.or_row(q, static_cast<std::size_t>(from_[e]));
  }
  return jminus_;
}

const BitMatrix& CausalGraph::iplus() const {
  if (!iplus_.empty()) return iplus_;
  const BitMatrix& jp = jplus();
  iplus_ = BitMatrix(n_, n_);
  // I+(p): reachable by a chain containing at least one timelike edge.
  // Recursion over successors: timelike edge contributes J+(q) (push-up),
  // a null edge contributes I+(q).
  for (std::size_t i = n_; i-- > 0;) {
    const auto p = static_cast<std::size_t>(topo_order_[i]);
    for (std::size_t e = offsets_[p]; e < offsets_[p + 1]; ++e) {
      const auto q = static_cast<std::size_t>(to_[e]);
      if (timelike_[e])
        iplus_.or_row_external(p, jp.row(q));
      else
        iplus_.or_row(p, q);
    }
  }
  return iplus_;
}

const BitMatrix& CausalGraph::iminus() const {
  if (!iminus_.empty()) return iminus_;
  const BitMatrix& jm = jminus();
  iminus_ = BitMatrix(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto q = static_cast<std::size_t>(topo_order_[i]);
    for (std::size_t e = roffsets_[q]; e < roffsets_[q + 1]; ++e) {
      const auto p = static_cast<std::size_t>(from_[e]);
      if (timelike_[redge_eidx_[e]])
        iminus_.or_row_external(q, jm.row(p));
      else
        iminus_.or_row(q, p);
    }
  }
  return iminus_;
}

std::vector<std::int32_t> CausalGraph::causal_future(std::size_t p) const {
  std::vector<std::int32_t> out;
  jplus().for_each_in_row(p, [&](std::size_t q) { out.push_back(static_cast<std::int32_t>(q)); });
  return out;
}

std::vector<std::int32_t> CausalGraph::causal_past(std::size_t p) const {
  std::vector<std::int32_t> out;
  jminus().for_each_in_row(p, [&](std::size_t q) { out.push_back(static_cast<std::int32_t>(q)); });
  return out;
}

std::vector<std::int32_t> CausalGraph::diamond(std::size_t p, std::size_t q) const {
  const BitMatrix& jp = jplus();
  const BitMatrix& jm = jminus();
  std::vector<std::int32_t> out;
  const uint64_t* a = jp.row(p);
  const uint64_t* b = jm.row(q);
  for (std::size_t w = 0; w < jp.words_per_row(); ++w) {
    uint64_t m = a[w] & b[w];
    while (m) {
      out.push_back(static_cast<std::int32_t>(w * 64 + std::countr_zero(m)));
      m &= m - 1;
    }
  }
  return out;
}

CausalGraph::PushUpReport CausalGraph::check_push_up() const {
  const BitMatrix& jp = jplus();
  const BitMatrix& ip = iplus();
  PushUpReport rep;

  // U(p) = union over r in J+(p) of I+(r); must be contained in I+(p).
  BitMatrix U(n_, n_);
  for (std::size_t i = n_; i-- > 0;) {
    const auto p = static_cast<std::size_t>(topo_order_[i]);
    U.or_row_external(p, ip.row(p));
    for (std::size_t e = offsets_[p]; e < offsets_[p + 1]; ++e) U.or_row(p, static_cast<std::size_t>(to_[e]));
  }
  for (std::size_t p = 0; p < n_; ++p) rep.i_after_j_violations += U.count_andnot(p, ip, p);

  // V(p) = union over r in I+(p) of J+(r); must be contained in I+(p).
  BitMatrix V(n_, n_);
  for (std::size_t i = n_; i-- > 0;) {
    const auto p = static_cast<std::size_t>(topo_order_[i]);
    for (std::size_t e = offsets_[p]; e < offsets_[p + 1]; ++e) {
      const auto q = static_cast<std::size_t>(to_[e]);
      if (timelike_[e])
        V.or_row_external(p, jp.row(q));
      else
        V.or_row(p, q);
    }
  }
  for (std::size_t p = 0; p < n_; ++p) rep.j_after_i_violations += V.count_andnot(p, ip, p);
  return rep;
}

std::vector<double> CausalGraph::proper_time_from(std::size_t p) const {
  require_acyclic();
  std::vector<double> dist(n_, kNegInf);
  dist[p] = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const auto u = static_cast<std::size_t>(topo_order_[i]);
    const double du = dist[u];
    if (du == kNegInf) continue;
    for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e) {
      const auto q = static_cast<std::size_t>(to_[e]);
      dist[q] = std::max(dist[q], du + weight_[e]);
    }
  }
  return dist;
}

std::vector<double> CausalGraph::proper_time_to(std::size_t q) const {
  require_acyclic();
  std::vector<double> dist(n_, kNegInf);
  dist[q] = 0.0;
  for (std::size_t i = n_; i-- > 0;) {
    const auto u = static_cast<std::size_t>(topo_order_[i]);
    const double du = dist[u];
    if (du == kNegInf) continue;
    for (std::size_t e = roffsets_[u]; e < roffsets_[u + 1]; ++e) {
      const auto p = static_cast<std::size_t>(from_[e]);
      dist[p] = std::max(dist[p], du + weight_[redge_eidx_[e]]);
    }
  }
  return dist;
}

double CausalGraph::time_separation(std::size_t p, std::size_t q) const {
  if (p == q) return 0.0;
  const auto dist = proper_time_from(p);
  return dist[q] == kNegInf ? 0.0 : dist[q];
}

std::vector<std::int32_t> CausalGraph::inextendible_chain(std::size_t seed) const {
  // Step preference: straightest displacement first, then shortest, then
  // leftmost; fully deterministic.
  auto better = [&](std::int32_t cand, std::int32_t best, std::size_t base) {
    if (best < 0) return true;
    const int bx = st_->node_ix(static_cast<std::size_t>(base));
    const auto key = [&](std::int32_t v) {
      const int ddx = st_->chart().col_delta(bx, st_->node_ix(static_cast<std::size_t>(v)));
      const int ddt = st_->node_it(static_cast<std::size_t>(v)) - st_->node_it(base);
      return std::tuple<int, int, int>(std::abs(ddx), std::abs(ddt), ddx);
    };
    return key(cand) < key(best);
  };

  std::vector<std::int32_t> forward;
  std::size_t cur = seed;
  while (true) {
    std::int32_t next = -1;
    for (std::size_t e = offsets_[cur]; e < offsets_[cur + 1]; ++e)
      if (better(to_[e], next, cur)) next = to_[e];
    if (next < 0) break;
    forward.push_back(next);
    cur = static_cast<std::size_t>(next);
  }
  std::vector<std::int32_t> backward;
  cur = seed;
  while (true) {
    std::int32_t prev = -1;
    for (std::size_t e = roffsets_[cur]; e < roffsets_[cur + 1]; ++e) {
      const std::int32_t cand = from_[e];
      if (prev < 0 ||
          better(cand, prev, cur)) // same preference applied to predecessors
        prev = cand;
    }
    if (prev < 0) break;
    backward.push_back(prev);
    cur = static_cast<std::size_t>(prev);
  }
  std::vector<std::int32_t> chain(backward.rbegin(), backward.rend());
  chain.push_back(static_cast<std::int32_t>(seed));
  chain.insert(chain.end(), forward.begin(), forward.end());
  return chain;
}

std::vector<std::int32_t> CausalGraph::interior_deadends() const {
  std::vector<std::int32_t> out;
  for (std::size_t p = 0; p < n_; ++p) {
    if (offsets_[p] != offsets_[p + 1]) continue;
    if (st_ && st_->node_it(p) >= st_->chart().nt - 1) continue;
    out.push_back(static_cast<std::int32_t>(p));
  }
  return out;
}

std::size_t CausalGraph::cone_bound_violations() const {
  const BitMatrix& jp = jplus();
  const Chart& chart = st_->chart();
  const double ht = chart.ht();
  const double hx = chart.hx();
  std::size_t bad = 0;
  for (std::size_t p = 0; p < n_; ++p) {
    const int it_p = st_->node_it(p);
    const int ix_p = st_->node_ix(p);
    jp.for_each_in_row(p, [&](std::size_t x) {
      const int dt = st_->node_it(x) - it_p;
      const int dcol = chart.col_delta(ix_p, st_->node_ix(x));
      if (dt < 0) {
        ++bad;
        return;
      }
      const double bound = max_edge_slope_ * dt * ht + radius_ * hx;
      if (std::abs(dcol) * hx > bound + 1e-12) ++bad;
    });
  }
  return bad;
}

CausalGraph build_causal_graph(const SampledSpacetime& st, int stencil_radius) {
  return CausalGraph(st, stencil_radius);
}

} // namespace tempora
