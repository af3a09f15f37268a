#ifndef TEMPORA_UTIL_HPP
#define TEMPORA_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace tempora {

// ---------------------------------------------------------------------------
// Smoothstep machinery. All partition/ramp functions in the synthesis are
// built from the quintic smoothstep, which has exactly-zero / exactly-one
// plateaus and C^2 junctions, so support claims are exact at the plateaus.
// ---------------------------------------------------------------------------

/// Quintic smoothstep: 0 for u <= 0, 1 for u >= 1, C^2 monotone in between.
inline double smoothstep5(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

/// Antiderivative of smoothstep5 with F(0) = 0. For u >= 1: F(u) = u - 1/2.
inline double smoothstep5_integral(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return u - 0.5;
  const double u4 = u * u * u * u;
  return u4 * (2.5 + u * (-3.0 + u));
}

/// 0 for x <= lo, 1 for x >= hi, smooth monotone in between.
inline double smooth_ramp(double x, double lo, double hi) {
  return smoothstep5((x - lo) / (hi - lo));
}

/// Monotone C^2 function with f(x) = 0 for x <= 0, f(x) = x for x >= 1,
/// 0 <= f(x) <= x in between. Slope never exceeds ~1.9.
inline double ramp_to_identity(double x) {
  return x <= 0.0 ? 0.0 : x * smoothstep5(x);
}

/// Reparametrization ramp used when splicing steep pieces: zero below
/// `zero_below`, identity at and above `identity_from`, C^2 monotone.
/// Requires zero_below < identity_from and identity_from > 0.
double splice_ramp(double x, double zero_below, double identity_from);

/// Glue plateau ramp: identity for x <= a, constant (a+b)/2 for x >= (a+b)/2,
/// C^2 monotone in between (slope ~<= 1.94). Requires b > a.
double glue_phi(double x, double a, double b);

// ---------------------------------------------------------------------------
// Compensated summation. Reduction order is fixed by the caller; Kahan
// compensation keeps measure sums accurate to ~eps independent of length.
// ---------------------------------------------------------------------------
class KahanSum {
public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// ---------------------------------------------------------------------------
// Deterministic parallel index loop. Results must be written to disjoint
// per-index slots; reductions stay serial at call sites.
// ---------------------------------------------------------------------------
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& chunk_fn);

inline void parallel_for_each(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) fn(i);
  });
}

// ---------------------------------------------------------------------------
// Formatting helpers (printf-based; byte-stable across runs).
// ---------------------------------------------------------------------------
inline std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_g6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

} // namespace tempora

#endif
