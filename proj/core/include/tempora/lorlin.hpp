#ifndef TEMPORA_LORLIN_HPP
#define TEMPORA_LORLIN_HPP

#include <span>
#include <vector>

#include "tempora/errors.hpp"

namespace tempora {

/// Causal type of a tangent vector. Sign convention: timelike vectors have
/// B(v,v) < 0, the signature is (1, dim-1).
enum class CausalClass { Timelike, Lightlike, Spacelike, Zero };

const char* to_string(CausalClass c);

/// Symmetric bilinear form of Lorentzian signature on a dim-dimensional
/// tangent space. Components are stored row-major, geometric units.
class MetricTensor {
public:
  MetricTensor(int dim, std::vector<double> components);

  /// Minkowski form diag(-1, 1, ..., 1).
  static MetricTensor minkowski(int dim);

  int dim() const { return dim_; }
  double component(int i, int j) const { return comp_[static_cast<std::size_t>(i) * dim_ + j]; }
  const std::vector<double>& components() const { return comp_; }

  double eval(std::span<const double> v, std::span<const double> w) const;
  double quadratic(std::span<const double> v) const { return eval(v, v); }

  /// Largest |component|; the scale used for null-classification tolerances.
  double max_abs() const { return max_abs_; }

  /// Symmetric to tolerance and eigenvalue spectrum has exactly one negative
  /// value. Construction already enforces this; re-check available for tests.
  bool is_lorentzian() const;

  /// Ascending eigenvalues of the component matrix (relative to the identity).
  std::vector<double> eigenvalues() const;

  /// Apply the inverse matrix to a covector: returns g^{-1} df.
  std::vector<double> solve(std::span<const double> covector) const;

private:
  int dim_;
  std::vector<double> comp_;
  double max_abs_;
};

/// Relative tolerance used to call a quadratic form value "null".
inline constexpr double kNullTolerance = 1e-12;

CausalClass classify(const MetricTensor& B, std::span<const double> v);

/// sqrt(-B(v,v)) for causal v. Domain error on spacelike input.
double lorentz_norm(const MetricTensor& B, std::span<const double> v);

/// True iff two causal nonzero vectors lie in the same connected component of
/// the double cone. Same component iff B(v,w) < 0; for the degenerate
/// B(v,w) = 0 case (both null and proportional) the sign of the euclidean
/// pairing decides.
bool same_cone(const MetricTensor& B, std::span<const double> v, std::span<const double> w);

// ---------------------------------------------------------------------------
// Flat 1+1 specialization used in per-node hot paths. Thresholds and
// conventions match the general API exactly.
// ---------------------------------------------------------------------------

/// Symmetric 2x2 form (t,x) block: [[tt, tx], [tx, xx]].
struct Sym2 {
  double tt, tx, xx;

  double eval(double vt, double vx, double wt, double wx) const {
    return tt * vt * wt + tx * (vt * wx + vx * wt) + xx * vx * wx;
  }
  double quadratic(double vt, double vx) const { return eval(vt, vx, vt, vx); }
  double det() const { return tt * xx - tx * tx; }
  double max_abs() const;
  bool is_lorentzian() const;

  /// g^{-1} applied to a covector (dt, dx).
  void solve(double ct, double cx, double& out_t, double& out_x) const;

  Sym2 scaled(double s) const { return {tt * s, tx * s, xx * s}; }
  static Sym2 midpoint(const Sym2& a, const Sym2& b) {
    return {0.5 * (a.tt + b.tt), 0.5 * (a.tx + b.tx), 0.5 * (a.xx + b.xx)};
  }
  static Sym2 minkowski() { return {-1.0, 0.0, 1.0}; }
};

CausalClass classify(const Sym2& B, double vt, double vx);
double lorentz_norm(const Sym2& B, double vt, double vx);
bool same_cone(const Sym2& B, double vt, double vx, double wt, double wx);

} // namespace tempora

#endif
