#include "tempora/lorlin.hpp"

#include <algorithm>
#include <cmath>

namespace tempora {

const char* to_string(CausalClass c) {
  switch (c) {
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Lightlike: return "lightlike";
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Zero: return "zero";
  }
  return "?";
}

namespace {

double sq_norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return s;
}

// Cyclic Jacobi eigenvalue iteration for small symmetric matrices.
std::vector<double> jacobi_eigenvalues(int n, std::vector<double> a) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

CausalClass classify_value(double q, double scale) {
  if (scale == 0.0) return CausalClass::Zero;
  const double tol = kNullTolerance * scale;
  if (q < -tol) return CausalClass::Timelike;
  if (q > tol) return CausalClass::Spacelike;
  return CausalClass::Lightlike;
}

} // namespace

MetricTensor::MetricTensor(int dim, std::vector<double> components) : dim_(dim), comp_(std::move(components)) {
  if (dim_ < 2) throw InputError("metric dimension must be >= 2");
  if (comp_.size() != static_cast<std::size_t>(dim_) * dim_)
    throw InputError("metric component count does not match dimension");
  max_abs_ = 0.0;
  double asym = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      max_abs_ = std::max(max_abs_, std::abs(component(i, j)));
      asym = std::max(asym, std::abs(component(i, j) - component(j, i)));
    }
  }
  if (max_abs_ == 0.0) throw InputError("metric is identically zero");
  if (asym > 1e-9 * max_abs_) throw InputError("metric components are not symmetric");
  if (!is_lorentzian()) throw InputError("metric does not have Lorentzian signature (1, dim-1)");
}

MetricTensor MetricTensor::minkowski(int dim) {
  std::vector<double> c(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) c[static_cast<std::size_t>(i) * dim + i] = (i == 0 ? -1.0 : 1.0);
  return MetricTensor(dim, std::move(c));
}

double MetricTensor::eval(std::span<const double> v, std::span<const double> w) const {
  if (static_cast<int>(v.size()) != dim_ || static_cast<int>(w.size()) != dim_)
    throw InputError("vector length does not match metric dimension");
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    double row = 0.0;
    for (int j = 0; j < dim_; ++j) row += component(i, j) * w[j];
    s += v[i] * row;
  }
  return s;
}

std::vector<double> MetricTensor::eigenvalues() const { return jacobi_eigenvalues(dim_, comp_); }

bool MetricTensor::is_lorentzian() const {
  const auto ev = jacobi_eigenvalues(dim_, comp_);
  int neg = 0, pos = 0;
  for (double e : ev) {
    if (e < -kNullTolerance * max_abs_) ++neg;
    else if (e > kNullTolerance * max_abs_) ++pos;
  }
  return neg == 1 && pos == dim_ - 1;
}

std::vector<double> MetricTensor::solve(std::span<const double> covector) const {
  if (static_cast<int>(covector.size()) != dim_) throw InputError("covector length does not match metric dimension");
  // Gauss-Jordan with partial pivoting; dim is tiny.
  const int n = dim_;
  std::vector<double> a(comp_);
  std::vector<double> x(covector.begin(), covector.end());
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
    if (std::abs(at(piv, col)) < 1e-300) throw InputError("metric is numerically singular");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(at(piv, j), at(col, j));
      std::swap(x[piv], x[col]);
    }
    const double d = at(col, col);
    for (int j = 0; j < n; ++j) at(col, j) /= d;
    x[col] /= d;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = at(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) at(r, j) -= f * at(col, j);
      x[r] -= f * x[col];
    }
  }
  return x;
}

CausalClass classify(const MetricTensor& B, std::span<const double> v) {
  if (static_cast<int>(v.size()) != B.dim()) throw InputError("vector length does not match metric dimension");
  const double vv = sq_norm(v);
  if (vv == 0.0) return CausalClass::Zero;
  return classify_value(B.quadratic(v), B.max_abs() * vv);
}

double lorentz_norm(const MetricTensor& B, std::span<const double> v) {
  const CausalClass c = classify(B, v);
  if (c == CausalClass::Spacelike) throw InputError("lorentz_norm of a spacelike vector");
  const double q = B.quadratic(v);
  return q < 0.0 ? std::sqrt(-q) : 0.0;
}

namespace {

bool same_cone_impl(CausalClass cv, CausalClass cw, double bvw, double scale, double euclid_dot) {
  if (cv == CausalClass::Zero || cw == CausalClass::Zero || cv == CausalClass::Spacelike ||
      cw == CausalClass::Spacelike)
    throw InputError("same_cone requires nonzero causal vectors");
  if (std::abs(bvw) <= kNullTolerance * scale) {
    // Both null and proportional: the euclidean pairing carries the sign.
    return euclid_dot > 0.0;
  }
  return bvw < 0.0;
}

} // namespace

bool same_cone(const MetricTensor& B, std::span<const double> v, std::span<const double> w) {
  const CausalClass cv = classify(B, v);
  const CausalClass cw = classify(B, w);
  double dot = 0.0;
  for (int i = 0; i < B.dim(); ++i) dot += v[i] * w[i];
  const double scale = B.max_abs() * std::sqrt(sq_norm(v) * sq_norm(w));
  return same_cone_impl(cv, cw, B.eval(v, w), scale, dot);
}

// --- Sym2 -------------------------------------------------------------------

double Sym2::max_abs() const { return std::max({std::abs(tt), std::abs(tx), std::abs(xx)}); }

bool Sym2::is_lorentzian() const {
  // Signature (1,1) iff det < 0 (strictly, with the usual tolerance).
  return det() < -kNullTolerance * max_abs() * max_abs();
}

void Sym2::solve(double ct, double cx, double& out_t, double& out_x) const {
  const double d = det();
  out_t = (xx * ct - tx * cx) / d;
  out_x = (tt * cx - tx * ct) / d;
}

CausalClass classify(const Sym2& B, double vt, double vx) {
  const double vv = vt * vt + vx * vx;
  if (vv == 0.0) return CausalClass::Zero;
  return classify_value(B.quadratic(vt, vx), B.max_abs() * vv);
}

double lorentz_norm(const Sym2& B, double vt, double vx) {
  const CausalClass c = classify(B, vt, vx);
  if (c == CausalClass::Spacelike) throw InputError("lorentz_norm of a spacelike vector");
  const double q = B.quadratic(vt, vx);
  return q < 0.0 ? std::sqrt(-q) : 0.0;
}

bool same_cone(const Sym2& B, double vt, double vx, double wt, double wx) {
  const CausalClass cv = classify(B, vt, vx);
  const CausalClass cw = classify(B, wt, wx);
  const double scale = B.max_abs() * std::sqrt((vt * vt + vx * vx) * (wt * wt + wx * wx));
  return same_cone_impl(cv, cw, B.eval(vt, vx, wt, wx), scale, vt * wt + vx * wx);
}

} // namespace tempora
