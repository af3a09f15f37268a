#ifndef TEMPORA_CAUSAL_HPP
#define TEMPORA_CAUSAL_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tempora/bitset.hpp"
#include "tempora/spacetime.hpp"

namespace tempora {

/// Strict margin below which a future displacement counts as merely causal;
/// timelike edges require -B(d,d) >= kTimelikeMargin * |d|^2_euclid, which
/// keeps the chronology relation strictly inside the causal one under roundoff.
inline constexpr double kTimelikeMargin = 1e-6;

/// Directed acyclic causal relation over the included nodes of a sampled
/// spacetime. Edges join nodes within a stencil radius whose displacement is
/// future causal under the midpoint metric; timelike edges are the subset
/// with a strict margin. Reachability closures are materialized lazily as
/// bitset rows and cached.
///
/// The spacetime must outlive the graph. All query methods are const and safe
/// to call concurrently once the closures they touch have been materialized.
class CausalGraph {
public:
  CausalGraph(const SampledSpacetime& st, int stencil_radius);

  /// Fixture constructor for pathological graphs (no spacetime attached;
  /// only the order/topology queries work).
  static CausalGraph from_edge_list(std::size_t node_count,
                                    const std::vector<std::tuple<std::int32_t, std::int32_t, bool, double>>& edges);

  const SampledSpacetime& spacetime() const;
  int stencil_radius() const { return radius_; }
  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return to_.size(); }
  std::size_t timelike_edge_count() const { return timelike_count_; }

  // CSR access (forward adjacency).
  std::pair<std::size_t, std::size_t> out_range(std::size_t p) const { return {offsets_[p], offsets_[p + 1]}; }
  std::int32_t edge_to(std::size_t e) const { return to_[e]; }
  double edge_weight(std::size_t e) const { return weight_[e]; }
  bool edge_timelike(std::size_t e) const { return timelike_[e] != 0; }

  std::pair<std::size_t, std::size_t> in_range(std::size_t q) const { return {roffsets_[q], roffsets_[q + 1]}; }
  std::int32_t edge_from(std::size_t e) const { return from_[e]; }
  std::size_t redge_index(std::size_t e) const { return redge_eidx_[e]; }

  /// True iff the edge relation is acyclic (topological sort succeeds).
  bool check_causal() const { return acyclic_; }
  const std::vector<std::int32_t>& topo_order() const { return topo_order_; }

  // Lazy closure families. Materialization is not thread safe; call once
  // before fanning out queries.
  const BitMatrix& jplus() const;
  const BitMatrix& jminus() const;
  const BitMatrix& iplus() const;
  const BitMatrix& iminus() const;
  void set_threads(int threads) { threads_ = threads; }

  bool in_jplus(std::size_t p, std::size_t q) const { return jplus().test(p, q); }

  /// Reflexive-transitive causal future / past of a node, ascending ids.
  std::vector<std::int32_t> causal_future(std::size_t p) const;
  std::vector<std::int32_t> causal_past(std::size_t p) const;

  /// J+(p) intersected with J-(q); empty unless q is in J+(p).
  std::vector<std::int32_t> diamond(std::size_t p, std::size_t q) const;

  /// Push-up scan over the closure algebra: both compositions must land
  /// inside the chronology closure. Violations are data, not errors.
  struct PushUpReport {
    std::size_t i_after_j_violations = 0; // I+ chained after J+ escaping I+
    std::size_t j_after_i_violations = 0; // J+ chained after I+ escaping I+
    std::size_t total() const { return i_after_j_violations + j_after_i_violations; }
  };
  PushUpReport check_push_up() const;

  /// Longest proper-time DP from / to a node, over the topological order.
  /// Unreachable entries are -inf.
  std::vector<double> proper_time_from(std::size_t p) const;
  std::vector<double> proper_time_to(std::size_t q) const;

  /// Supremum of chain proper time p -> q; 0 when q is not in J+(p).
  double time_separation(std::size_t p, std::size_t q) const;

  /// Greedy maximal chain through a seed: extended backward and forward by
  /// preferring the straightest available step. Deterministic.
  std::vector<std::int32_t> inextendible_chain(std::size_t seed) const;

  /// Nodes with no successor that sit strictly below the top time row; on an
  /// exclusion-free model these indicate a stencil/resolution defect.
  std::vector<std::int32_t> interior_deadends() const;

  /// Discrete diamond-compactness scan: every node of J+(p) must stay within
  /// the coordinate cone |dx| <= slope_max * dt + radius * hx. Returns the
  /// number of (p, x) failures.
  std::size_t cone_bound_violations() const;

  double max_edge_slope() const { return max_edge_slope_; }

private:
  CausalGraph() = default;
  void build_transpose();
  void compute_topo();
  void require_acyclic() const;

  const SampledSpacetime* st_ = nullptr;
  int radius_ = 0;
  std::size_t n_ = 0;
  std::size_t timelike_count_ = 0;
  double max_edge_slope_ = 0.0;
  int threads_ = 1;

  std::vector<std::size_t> offsets_;
  std::vector<std::int32_t> to_;
  std::vector<double> weight_;
  std::vector<std::uint8_t> timelike_;

  std::vector<std::size_t> roffsets_;
  std::vector<std::int32_t> from_;
  std::vector<std::size_t> redge_eidx_;

  bool acyclic_ = true;
  std::vector<std::int32_t> topo_order_;

  mutable BitMatrix jplus_, jminus_, iplus_, iminus_;
};

CausalGraph build_causal_graph(const SampledSpacetime& st, int stencil_radius);

} // namespace tempora

#endif
