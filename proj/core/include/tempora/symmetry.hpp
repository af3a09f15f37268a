#ifndef TEMPORA_SYMMETRY_HPP
#define TEMPORA_SYMMETRY_HPP

#include <cstdint>
#include <vector>

#include "tempora/geroch.hpp"
#include "tempora/steep.hpp"

namespace tempora {

/// Group-averaged measure: w(x) -> mean over elements of w(g x), renormalized.
/// Exactly invariant under every element up to floating summation order.
VolumeMeasure average_measure(const VolumeMeasure& mu, const GroupAction& group);

/// Group-averaged field: mean over elements of f(g x), fixed element order.
ScalarField average_field(const ScalarField& f, const GroupAction& group);

/// Largest |f(g x) - f(x)| over nontrivial elements and nodes.
double invariance_deviation(const ScalarField& f, const GroupAction& group);

/// Orbit acausality scan: for every node and nontrivial element, the image
/// must not be causally related to the node.
struct OrbitReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::int32_t first_node = -1;
  std::size_t first_element = 0;
};

OrbitReport check_orbit_acausal(const CausalGraph& graph, const GroupAction& group);

/// Cone equivariance: g(J+-(p)) == J+-(g p) and likewise for the chronology,
/// tested as bitset equality. Returns the number of failing (element, node,
/// family) triples.
std::size_t cone_equivariance_violations(const CausalGraph& graph, const GroupAction& group);

struct InvariantSpec {
  std::vector<SurfaceGraph> surfaces; // S_1 .. S_m (possibly empty)
  std::vector<double> values;         // a_1 .. a_m, strictly increasing
  SurfaceGraph s_minus, s_plus;       // outer bound surfaces
  std::vector<double> f_minus, f_plus;
  bool steep = false;
  double measure_damping = 0.0;
  AdaptedOptions adapted;
};

struct InvariantResult {
  ScalarField field; // the invariant temporal function T
  ScalarField reference;
  BandedTime reference_bands;
  SynthesisTrace trace;
  double invariance = 0.0; // max |T(g x) - T(x)|
  double tol_h = 0.0;
  double min_interior_margin = 0.0;
  std::vector<std::uint8_t> interior;
  std::size_t monotonicity_violations = 0;
  std::vector<double> level_hausdorff; // per requested surface
};

/// Full invariant pipeline: averaged measure -> cone-volume reference ->
/// (adapted) steep synthesis -> group averaging -> verification. With
/// surfaces, the function is pinned to the requested values by monotone
/// plateau/ramp gluing. Steepness may only be requested for at most one
/// surface and an isometric group.
InvariantResult invariant_temporal(const CausalGraph& graph, const GroupAction& group, const InvariantSpec& spec);

} // namespace tempora

#endif
