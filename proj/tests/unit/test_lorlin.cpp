#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tempora/lorlin.hpp"

using namespace tempora;

namespace {

std::mt19937_64 rng(20260809);

// Random Lorentzian form B = A^T diag(-1,1,...) A with a well-conditioned A.
std::vector<double> random_frame(int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    std::vector<double> a(static_cast<std::size_t>(dim) * dim);
    for (double& v : a) v = u(rng);
    for (int i = 0; i < dim; ++i) a[static_cast<std::size_t>(i) * dim + i] += 2.0;
    // Crude conditioning check via row norms vs. diagonal dominance.
    bool ok = true;
    for (int i = 0; i < dim && ok; ++i) {
      double off = 0.0;
      for (int j = 0; j < dim; ++j)
        if (j != i) off += std::abs(a[static_cast<std::size_t>(i) * dim + j]);
      if (off > 1.8) ok = false;
    }
    if (ok) return a;
  }
}

MetricTensor random_metric(int dim) {
  const auto a = random_frame(dim);
  std::vector<double> b(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) {
        const double eps = k == 0 ? -1.0 : 1.0;
        s += eps * a[static_cast<std::size_t>(k) * dim + i] * a[static_cast<std::size_t>(k) * dim + j];
      }
      b[static_cast<std::size_t>(i) * dim + j] = s;
    }
  return MetricTensor(dim, b);
}

std::vector<double> random_causal(const MetricTensor& B, bool timelike_only = false) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    std::vector<double> v(B.dim());
    for (double& c : v) c = g(rng);
    const CausalClass cls = classify(B, v);
    if (cls == CausalClass::Timelike) return v;
    if (!timelike_only && cls == CausalClass::Lightlike) return v;
  }
}

std::vector<double> sum(const std::vector<double>& a, const std::vector<double>& b, double la = 1.0,
                        double lb = 1.0) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = la * a[i] + lb * b[i];
  return out;
}

} // namespace

TEST_CASE("classification on the flat form") {
  const MetricTensor mink = MetricTensor::minkowski(2);
  CHECK(classify(mink, std::array{1.0, 0.0}) == CausalClass::Timelike);
  CHECK(classify(mink, std::array{1.0, 1.0}) == CausalClass::Lightlike);
  CHECK(classify(mink, std::array{0.0, 1.0}) == CausalClass::Spacelike);
  CHECK(classify(mink, std::array{0.0, 0.0}) == CausalClass::Zero);
  // Scale invariance of the classification.
  CHECK(classify(mink, std::array{1e8, 1e8}) == CausalClass::Lightlike);
  CHECK(classify(mink, std::array{1e-8, 1e-8}) == CausalClass::Lightlike);
  CHECK_THROWS_AS((void)classify(mink, std::array{1.0, 0.0, 0.0}), InputError);
}

TEST_CASE("norms of causal vectors") {
  const MetricTensor mink = MetricTensor::minkowski(2);
  CHECK(lorentz_norm(mink, std::array{2.0, 0.0}) == doctest::Approx(2.0));
  CHECK(lorentz_norm(mink, std::array{1.0, 1.0}) == doctest::Approx(0.0));
  CHECK(lorentz_norm(mink, std::array{5.0, 3.0}) == doctest::Approx(4.0));
  CHECK_THROWS_AS((void)lorentz_norm(mink, std::array{0.0, 1.0}), InputError);
}

TEST_CASE("cone component identification") {
  const MetricTensor mink = MetricTensor::minkowski(2);
  CHECK(same_cone(mink, std::array{1.0, 0.0}, std::array{2.0, 1.0}));
  CHECK_FALSE(same_cone(mink, std::array{1.0, 0.0}, std::array{-1.0, 0.0}));
  CHECK(same_cone(mink, std::array{1.0, 1.0}, std::array{1.0, -1.0}));
  // Proportional null pairs resolve through the euclidean pairing.
  CHECK(same_cone(mink, std::array{1.0, 1.0}, std::array{2.0, 2.0}));
  CHECK_FALSE(same_cone(mink, std::array{1.0, 1.0}, std::array{-1.0, -1.0}));
  CHECK_THROWS_AS((void)same_cone(mink, std::array{1.0, 0.0}, std::array{0.0, 1.0}), InputError);
}

TEST_CASE("cone components match the angular connectivity scan") {
  // Random 2d Lorentzian forms: same_cone agrees with path connectivity
  // inside the closed double cone minus the origin.
  for (int trial = 0; trial < 50; ++trial) {
    const MetricTensor B = random_metric(2);
    const auto v = random_causal(B);
    const auto w = random_causal(B);
    auto quad = [&](double t, double x) { return B.quadratic(std::array{t, x}); };
    const bool expect = oracle::cone_path_connected(quad, std::atan2(v[1], v[0]), std::atan2(w[1], w[0]));
    CHECK(same_cone(B, v, w) == expect);
  }
}

TEST_CASE("reverse Cauchy-Schwarz, reverse triangle, energy monotonicity") {
  const int dims[] = {2, 3, 4};
  for (const int dim : dims) {
    for (int trial = 0; trial < 800; ++trial) {
      const MetricTensor B = random_metric(dim);
      const auto v = random_causal(B);
      auto w = random_causal(B);
      const double cs = B.eval(v, w) * B.eval(v, w) - B.quadratic(v) * B.quadratic(w);
      CHECK(cs >= -1e-9);

      if (!same_cone(B, v, w))
        for (double& c : w) c = -c;
      const auto vw = sum(v, w);
      const double tri = lorentz_norm(B, vw) - lorentz_norm(B, v) - lorentz_norm(B, w);
      CHECK(tri >= -1e-9);
      CHECK(B.quadratic(vw) <= B.quadratic(v) + 1e-9);
    }
  }
}

TEST_CASE("reverse triangle equality holds exactly for dependent null pairs") {
  for (int trial = 0; trial < 200; ++trial) {
    const MetricTensor B = random_metric(2);
    // Null direction by bisecting the quadratic's sign change.
    double lo = 0.0, hi = M_PI / 2;
    auto q = [&](double a) { return B.quadratic(std::array{std::cos(a), std::sin(a)}); };
    if (q(lo) > 0.0) continue;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (q(mid) <= 0.0 ? lo : hi) = mid;
    }
    const std::array v{std::cos(lo), std::sin(lo)};
    const std::array w{2.5 * v[0], 2.5 * v[1]};
    const auto vw = sum({v[0], v[1]}, {w[0], w[1]});
    const double lhs = lorentz_norm(B, vw);
    const double rhs = lorentz_norm(B, v) + lorentz_norm(B, w);
    CHECK(std::abs(lhs - rhs) <= 2e-5); // both norms vanish at the cone
    // Rank check: the pair is linearly dependent.
    CHECK(std::abs(v[0] * w[1] - v[1] * w[0]) <= 1e-12);
  }
}

TEST_CASE("timelike convexity within a component") {
  for (int trial = 0; trial < 500; ++trial) {
    const MetricTensor B = random_metric(3);
    const auto v = random_causal(B, true);
    auto w = random_causal(B, true);
    if (!same_cone(B, v, w))
      for (double& c : w) c = -c;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double lam = u(rng);
    CHECK(classify(B, sum(v, w, lam, 1.0 - lam)) == CausalClass::Timelike);
  }
}

TEST_CASE("null cones determine the form up to scale") {
  // Sample null vectors of B, ask which symmetric forms vanish on all of
  // them: the solution space must be the line through B itself.
  for (const int dim : {2, 3}) {
    for (int trial = 0; trial < 30; ++trial) {
      const MetricTensor B = random_metric(dim);
      const int m = dim * (dim + 1) / 2;
      const int samples = 3 * m;
      std::vector<double> rows;
      std::normal_distribution<double> g(0.0, 1.0);
      for (int s = 0; s < samples; ++s) {
        // Null vector: bisect between a timelike and a spacelike sample.
        std::vector<double> a = random_causal(B, true);
        std::vector<double> b(dim);
        do {
          for (double& c : b) c = g(rng);
        } while (classify(B, b) != CausalClass::Spacelike);
        for (int i = 0; i < 200; ++i) {
          const auto mid = sum(a, b, 0.5, 0.5);
          (B.quadratic(mid) <= 0.0 ? a : b) = mid;
        }
        // Row of the linear system over symmetric coefficients.
        for (int i = 0; i < dim; ++i)
          for (int j = i; j < dim; ++j) rows.push_back((i == j ? 1.0 : 2.0) * a[i] * a[j]);
      }
      std::vector<double> kernel;
      const int rank = oracle::nullspace(rows, samples, m, kernel);
      REQUIRE(rank == m - 1);
      // Kernel vector is proportional to B.
      double ratio = 0.0;
      int k = 0;
      for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j, ++k) {
          const double bij = B.component(i, j);
          if (std::abs(bij) > 1e-6 && ratio == 0.0) ratio = kernel[k] / bij;
        }
      k = 0;
      for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j, ++k) CHECK(kernel[k] == doctest::Approx(ratio * B.component(i, j)).epsilon(2e-4));
    }
  }
}

TEST_CASE("flat 1+1 block agrees with the general path") {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const MetricTensor B = random_metric(2);
    const Sym2 s{B.component(0, 0), B.component(0, 1), B.component(1, 1)};
    const double vt = u(rng) * 3.0, vx = u(rng) * 3.0;
    CHECK(classify(s, vt, vx) == classify(B, std::array{vt, vx}));
    double st, sx;
    s.solve(1.0, 0.5, st, sx);
    const auto gen = B.solve(std::array{1.0, 0.5});
    CHECK(st == doctest::Approx(gen[0]).epsilon(1e-10));
    CHECK(sx == doctest::Approx(gen[1]).epsilon(1e-10));
  }
}

TEST_CASE("signature validation rejects non-Lorentzian input") {
  CHECK_THROWS_AS(MetricTensor(2, {1.0, 0.0, 0.0, 1.0}), InputError);
  CHECK_THROWS_AS(MetricTensor(2, {-1.0, 0.0, 0.0, -1.0}), InputError);
  CHECK_THROWS_AS(MetricTensor(2, {-1.0, 0.5, 0.4, 1.0}), InputError); // asymmetric
  CHECK(MetricTensor(3, {-2.0, 0, 0, 0, 1.5, 0.2, 0, 0.2, 1.0}).is_lorentzian());
}
