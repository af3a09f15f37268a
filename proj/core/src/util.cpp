#include "tempora/util.hpp"

#include <cassert>

namespace tempora {

double splice_ramp(double x, double zero_below, double identity_from) {
  // Two pieces: a plateau-to-plateau smoothstep rise over [LO, m], then a
  // smooth bend onto the identity over [m, b]. The bend contributes
  // (b - m)/2, so the rise height (b+m)/2 lands exactly on x at b; keeping
  // m above -b keeps that height positive and the ramp monotone for
  // arbitrarily low LO. C^2 junctions; exactly 0 below LO, exactly x from
  // identity_from on.
  const double LO = zero_below;
  const double b = identity_from;
  assert(b > LO && b > 0.0);
  if (x <= LO) return 0.0;
  const double m = std::max(0.5 * (LO + b), -0.8 * b);
  const double v0 = 0.5 * (b + m);
  if (x < m) return v0 * smoothstep5((x - LO) / (m - LO));
  const double rho = b - m;
  return v0 + rho * smoothstep5_integral((x - m) / rho);
}

double glue_phi(double x, double a, double b) {
  assert(b > a);
  if (x <= a) return x;
  const double mid = 0.5 * (a + b);
  if (x >= mid) return mid;
  // phi'(u) = (1 - ss5(u)) * (1 + 30 u^2 (1-u)^2) on the unit interval has
  // integral exactly 1, so the plateau value lands on mid. Expanded:
  // phi' = 1 + 30u^2 - 70u^3 + 45u^4 - 306u^5 + 1050u^6 - 1380u^7 + 810u^8 - 180u^9.
  const double w = mid - a;
  const double u = (x - a) / w;
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  const double u6 = u5 * u, u7 = u6 * u, u8 = u7 * u, u9 = u8 * u, u10 = u9 * u;
  const double F = u + 10.0 * u3 - 17.5 * u4 + 9.0 * u5 - 51.0 * u6 + 150.0 * u7 -
                   172.5 * u8 + 90.0 * u9 - 18.0 * u10;
  return a + w * F;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
  if (n == 0) return;
  if (threads <= 1 || n < 256) {
    chunk_fn(0, n);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(chunk_fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

} // namespace tempora
