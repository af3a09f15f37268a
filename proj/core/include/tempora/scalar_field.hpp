#ifndef TEMPORA_SCALAR_FIELD_HPP
#define TEMPORA_SCALAR_FIELD_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "tempora/spacetime.hpp"

namespace tempora {

/// Per-node scalar values, indexed like the spacetime's nodes.
struct ScalarField {
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(std::size_t n, double fill = 0.0) : values(n, fill) {}

  double operator[](std::size_t n) const { return values[n]; }
  double& operator[](std::size_t n) { return values[n]; }
  std::size_t size() const { return values.size(); }
};

ScalarField field_from(const SampledSpacetime& st, const std::function<double(double, double)>& f_of_tx);

/// Finite-difference differential (covector) at a node. Central differences in
/// the interior, one-sided second order at chart or exclusion boundaries.
struct Gradient2 {
  double dt = 0.0;
  double dx = 0.0;
  bool valid = false;
};

std::vector<Gradient2> field_gradients(const SampledSpacetime& st, const ScalarField& f);

/// Gradient at a single node (same stencil rules as field_gradients).
Gradient2 local_gradient(const SampledSpacetime& st, const ScalarField& f, std::size_t node);

/// g(grad a, grad b) at a node from two differentials.
double lorentz_pair(const SampledSpacetime& st, std::size_t node, const Gradient2& a, const Gradient2& b);

/// g(grad f, grad f) per node via the inverse metric; NaN where the stencil is
/// incomplete (an isolated column on a carved chart).
ScalarField lorentz_sq_gradient(const SampledSpacetime& st, const ScalarField& f);

/// -g(grad f, grad f): positive where the field is temporal, >= c^2 where it
/// is steep with constant c. NaN where the gradient is unavailable.
ScalarField steepness_margin(const SampledSpacetime& st, const ScalarField& f);

/// Almost-temporal scan: at every node the gradient must be zero (below
/// `zero_floor` in euclidean size) or past-directed causal within tolerance.
struct AlmostTemporalReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t first_violation = static_cast<std::size_t>(-1);
};

AlmostTemporalReport almost_temporal_scan(const SampledSpacetime& st, const ScalarField& f, double zero_floor,
                                          double cone_tolerance);

} // namespace tempora

#endif
