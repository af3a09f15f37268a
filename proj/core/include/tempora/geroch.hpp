#ifndef TEMPORA_GEROCH_HPP
#define TEMPORA_GEROCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tempora/causal.hpp"
#include "tempora/scalar_field.hpp"

namespace tempora {

/// Normalized positive node weights (total mass 1). Built from the volume
/// density, optionally damped by sech^2(t / t_scale) so tall truncated charts
/// keep a finite, resolution-comparable total.
struct VolumeMeasure {
  std::vector<double> weights;

  static VolumeMeasure from_spacetime(const SampledSpacetime& st, double damping_t_scale = 0.0);
  void normalize();
  double total() const;
};

/// Cone-volume time functions: t_plus(x) = -mu(J+(x)), t_minus(x) = +mu(J-(x)).
/// t_plus < 0 < t_minus holds everywhere (closures are reflexive and weights
/// are positive).
struct GerochPair {
  ScalarField t_minus;
  ScalarField t_plus;
};

GerochPair geroch_pm(const CausalGraph& graph, const VolumeMeasure& mu, int threads = 1);

/// ln(-t_minus / t_plus). Throws on a sign violation (internal invariant).
ScalarField geroch_cauchy(const ScalarField& t_minus, const ScalarField& t_plus);

/// Counts causal edges p -> q with field(q) <= field(p).
struct TimeFunctionReport {
  std::size_t edges = 0;
  std::size_t violations = 0;
  std::int32_t first_violation_from = -1;
  std::int32_t first_violation_to = -1;
};

TimeFunctionReport verify_time_function(const CausalGraph& graph, const ScalarField& f);

/// Range check along greedy maximal chains: a chain passes when the field
/// spans [-threshold, +threshold] over it.
struct ChainRangeReport {
  struct Chain {
    std::int32_t seed;
    double min_value;
    double max_value;
    bool spans;
  };
  std::size_t chains = 0;
  std::size_t failures = 0;
  std::vector<Chain> failing; // capped sample
};

ChainRangeReport verify_cauchy(const CausalGraph& graph, const ScalarField& f, double threshold,
                               const std::vector<std::int32_t>& seeds, std::size_t max_reported = 16);

/// Extrema of a field along a column chain (the column's included nodes in
/// time order). For monotone fields these are the chain's boundary limits.
struct ChainExtrema {
  double min_value;
  double max_value;
};
ChainExtrema column_chain_extrema(const CausalGraph& graph, const ScalarField& f, int ix);

// ---------------------------------------------------------------------------
// Level sets and foliation export.
// ---------------------------------------------------------------------------

/// Level crossing of a field along each time-column, linearly interpolated.
/// Columns are timelike in every shipped model, so crossings are unique when
/// the field passes the time-function check.
struct LevelSet {
  double level = 0.0;
  std::vector<double> t_cross;        // per column; NaN when the column misses the level
  std::vector<std::int32_t> snapped;  // first node at/above the crossing; -1 when absent
  std::size_t crossings = 0;
};

LevelSet extract_level_set(const SampledSpacetime& st, const ScalarField& f, double level);

/// Causal edges between the snapped nodes of a level set (0 for a level set
/// of a verified time function at admissible slopes).
std::size_t level_band_causal_edges(const CausalGraph& graph, const LevelSet& ls);

/// Worst per-column distance between a level set and a surface graph.
double level_set_hausdorff(const SampledSpacetime& st, const LevelSet& ls, const SurfaceGraph& s);

struct Foliation {
  std::vector<LevelSet> levels;
  // Flow lines of the orientation field are the grid columns; each line is
  // labelled by its crossing coordinate on the first level.
  std::vector<double> flow_line_label; // per column
};

Foliation foliation_export(const CausalGraph& graph, const ScalarField& f, const std::vector<double>& levels);

} // namespace tempora

#endif
