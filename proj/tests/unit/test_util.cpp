#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tempora/util.hpp"

using namespace tempora;

TEST_CASE("smoothstep plateaus are exact") {
  CHECK(smoothstep5(-0.1) == 0.0);
  CHECK(smoothstep5(0.0) == 0.0);
  CHECK(smoothstep5(1.0) == 1.0);
  CHECK(smoothstep5(2.0) == 1.0);
  CHECK(smoothstep5(0.5) == doctest::Approx(0.5));
  // Monotone.
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = smoothstep5(i / 100.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("smoothstep integral matches finite sums") {
  for (const double u : {0.25, 0.5, 0.9, 1.0, 1.7}) {
    double acc = 0.0;
    const int N = 20000;
    for (int i = 0; i < N; ++i) acc += smoothstep5((i + 0.5) * u / N) * (u / N);
    CHECK(smoothstep5_integral(u) == doctest::Approx(acc).epsilon(1e-6));
  }
}

TEST_CASE("splice ramp: zero plateau, exact identity, monotone") {
  for (const auto [lo, b] : {std::pair{-1.0, 1.0}, std::pair{-30.0, 0.5}, std::pair{2.0, 9.0}}) {
    CHECK(splice_ramp(lo - 1.0, lo, b) == 0.0);
    CHECK(splice_ramp(lo, lo, b) == 0.0);
    CHECK(splice_ramp(b, lo, b) == doctest::Approx(b).epsilon(1e-12));
    CHECK(splice_ramp(b + 3.0, lo, b) == doctest::Approx(b + 3.0).epsilon(1e-12));
    double prev = -1e300;
    for (int i = 0; i <= 400; ++i) {
      const double x = lo - 1.0 + (b - lo + 3.0) * i / 400.0;
      const double v = splice_ramp(x, lo, b);
      CHECK(v >= prev - 1e-12);
      CHECK(v >= 0.0);
      CHECK(v <= std::max(x, b) + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("glue plateau ramp: identity below, exact midpoint plateau") {
  const double a = 0.0, b = 1.0;
  CHECK(glue_phi(-2.0, a, b) == -2.0);
  CHECK(glue_phi(0.0, a, b) == 0.0);
  CHECK(glue_phi(0.5, a, b) == doctest::Approx(0.5).epsilon(1e-12)); // mid plateau value
  CHECK(glue_phi(3.0, a, b) == doctest::Approx(0.5).epsilon(1e-12));
  double prev = -1e300;
  for (int i = 0; i <= 500; ++i) {
    const double x = -1.0 + 3.0 * i / 500.0;
    const double v = glue_phi(x, a, b);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  // Derivative 1 at the junction (finite difference).
  const double d = (glue_phi(a + 1e-6, a, b) - glue_phi(a - 1e-6, a, b)) / 2e-6;
  CHECK(d == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("compensated sums") {
  KahanSum s;
  for (int i = 0; i < 1000000; ++i) s.add(0.1);
  CHECK(s.value() == doctest::Approx(100000.0).epsilon(1e-12));
}

TEST_CASE("parallel loop covers every index once") {
  std::vector<int> hits(10000, 0);
  parallel_for_each(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
  for (const int h : hits) CHECK(h == 1);
}
