#ifndef TEMPORA_TEST_ORACLES_HPP
#define TEMPORA_TEST_ORACLES_HPP

// Independent reference computations for the test suite. Everything here is
// deliberately brute force and shares no code with the library paths it
// checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

struct Edge {
  std::int32_t from, to;
  bool timelike;
  double weight;
};

/// Reflexive reachability by breadth-first search over an explicit edge list.
inline std::set<std::int32_t> bfs_future(std::size_t n, const std::vector<Edge>& edges, std::int32_t start) {
  std::vector<std::vector<std::int32_t>> adj(n);
  for (const Edge& e : edges) adj[static_cast<std::size_t>(e.from)].push_back(e.to);
  std::set<std::int32_t> seen{start};
  std::vector<std::int32_t> queue{start};
  while (!queue.empty()) {
    const std::int32_t p = queue.back();
    queue.pop_back();
    for (const std::int32_t q : adj[static_cast<std::size_t>(p)])
      if (seen.insert(q).second) queue.push_back(q);
  }
  return seen;
}

inline std::set<std::int32_t> bfs_past(std::size_t n, const std::vector<Edge>& edges, std::int32_t start) {
  std::vector<Edge> rev;
  rev.reserve(edges.size());
  for (const Edge& e : edges) rev.push_back({e.to, e.from, e.timelike, e.weight});
  return bfs_future(n, rev, start);
}

/// Chronological future: reachable by a chain containing a timelike edge.
/// Computed as a two-state BFS (seen-without / seen-with a timelike edge).
inline std::set<std::int32_t> bfs_chronological(std::size_t n, const std::vector<Edge>& edges, std::int32_t start) {
  std::vector<std::vector<std::pair<std::int32_t, bool>>> adj(n);
  for (const Edge& e : edges) adj[static_cast<std::size_t>(e.from)].push_back({e.to, e.timelike});
  std::vector<std::uint8_t> plain(n, 0), strong(n, 0);
  plain[static_cast<std::size_t>(start)] = 1;
  std::vector<std::pair<std::int32_t, bool>> queue{{start, false}};
  while (!queue.empty()) {
    const auto [p, got] = queue.back();
    queue.pop_back();
    for (const auto& [q, tl] : adj[static_cast<std::size_t>(p)]) {
      const bool now = got || tl;
      auto& mark = now ? strong : plain;
      if (!mark[static_cast<std::size_t>(q)]) {
        mark[static_cast<std::size_t>(q)] = 1;
        queue.push_back({q, now});
      }
    }
  }
  std::set<std::int32_t> out;
  for (std::size_t q = 0; q < n; ++q)
    if (strong[q]) out.insert(static_cast<std::int32_t>(q));
  return out;
}

/// Longest weighted path by memoized recursion (graph must be acyclic).
inline double longest_path(std::size_t n, const std::vector<Edge>& edges, std::int32_t from, std::int32_t to) {
  std::vector<std::vector<std::pair<std::int32_t, double>>> adj(n);
  for (const Edge& e : edges) adj[static_cast<std::size_t>(e.from)].push_back({e.to, e.weight});
  std::vector<double> memo(n, -2.0);
  std::vector<std::uint8_t> done(n, 0);
  std::function<double(std::int32_t)> best = [&](std::int32_t p) -> double {
    if (p == to) return 0.0;
    if (done[static_cast<std::size_t>(p)]) return memo[static_cast<std::size_t>(p)];
    double b = -1.0; // unreachable
    for (const auto& [q, w] : adj[static_cast<std::size_t>(p)]) {
      const double sub = best(q);
      if (sub >= 0.0) b = std::max(b, w + sub);
    }
    done[static_cast<std::size_t>(p)] = 1;
    memo[static_cast<std::size_t>(p)] = b;
    return b;
  };
  return best(from);
}

/// Midpoint-rule area of an indicator over a box.
inline double quadrature_area(double t0, double t1, double x0, double x1, int cells,
                              const std::function<bool(double, double)>& inside) {
  const double dt = (t1 - t0) / cells, dx = (x1 - x0) / cells;
  std::int64_t count = 0;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j)
      if (inside(t0 + (i + 0.5) * dt, x0 + (j + 0.5) * dx)) ++count;
  return count * dt * dx;
}

/// Connectivity of two directions inside the closed causal double cone minus
/// the origin, by walking a fine angular grid.
inline bool cone_path_connected(const std::function<double(double, double)>& quad, double v_angle, double w_angle) {
  const int N = 20000;
  auto causal = [&](int k) {
    const double a = 2.0 * M_PI * k / N;
    return quad(std::cos(a), std::sin(a)) <= 1e-12;
  };
  auto idx = [&](double a) {
    int k = static_cast<int>(std::llround(a / (2.0 * M_PI) * N)) % N;
    return k < 0 ? k + N : k;
  };
  const int vi = idx(v_angle), wi = idx(w_angle);
  if (!causal(vi) || !causal(wi)) return false;
  // Walk forward and backward from vi staying causal.
  for (int dir : {1, -1}) {
    int k = vi;
    for (int step = 0; step < N; ++step) {
      if (k == wi) return true;
      const int next = ((k + dir) % N + N) % N;
      if (!causal(next)) break;
      k = next;
    }
    if (k == wi) return true;
  }
  return false;
}

/// Dense Gaussian elimination returning the rank and (when rank = cols-1) a
/// kernel vector. Rows-major a[r*cols + c].
inline int nullspace(std::vector<double> a, int rows, int cols, std::vector<double>& kernel) {
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    double best = 1e-9;
    for (int i = r; i < rows; ++i)
      if (std::abs(a[i * cols + c]) > best) {
        best = std::abs(a[i * cols + c]);
        piv = i;
      }
    if (piv < 0) continue;
    for (int j = 0; j < cols; ++j) std::swap(a[piv * cols + j], a[r * cols + j]);
    const double d = a[r * cols + c];
    for (int j = 0; j < cols; ++j) a[r * cols + j] /= d;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double f = a[i * cols + c];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) a[i * cols + j] -= f * a[r * cols + j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  const int rank = r;
  if (rank == cols - 1) {
    // Free column is the one not among the pivots.
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    int free_c = -1;
    for (int c = 0; c < cols; ++c)
      if (!is_pivot[c]) free_c = c;
    kernel.assign(cols, 0.0);
    kernel[free_c] = 1.0;
    for (int i = 0; i < rank; ++i) kernel[pivot_col[i]] = -a[i * cols + free_c];
  }
  return rank;
}

} // namespace oracle

#endif
