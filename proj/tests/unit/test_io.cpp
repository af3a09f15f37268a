#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "tempora/io.hpp"

using namespace tempora;

namespace {
SampledSpacetime carved() {
  ModelSpec s;
  s.family = ModelFamily::CarvedMinkowski;
  s.t_lo = -1;
  s.t_hi = 1;
  s.x_lo = -1;
  s.x_hi = 1;
  s.nt = 15;
  s.nx = 15;
  return build_model(s);
}
} // namespace

TEST_CASE("field CSV round trip preserves every node value exactly") {
  const SampledSpacetime st = carved();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int trial = 0; trial < 20; ++trial) {
    ScalarField f(st.node_count());
    for (double& v : f.values) v = u(rng);
    std::stringstream ss;
    write_field_csv(ss, st, f);
    const ScalarField back = read_field_csv(ss, st);
    for (std::size_t n = 0; n < st.node_count(); ++n) CHECK(back[n] == f[n]);
  }
}

TEST_CASE("field CSV header and shape") {
  const SampledSpacetime st = carved();
  const ScalarField f(st.node_count(), 1.5);
  const std::string csv = field_csv(st, f);
  CHECK(csv.rfind("i_t, i_x, t_coord, x_coord, value\n", 0) == 0);
  std::size_t lines = 0;
  for (const char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == st.node_count() + 1);
}

TEST_CASE("edge list is well formed") {
  const SampledSpacetime st = carved();
  const CausalGraph g(st, 2);
  std::ostringstream ss;
  write_edge_list(ss, g);
  std::istringstream in(ss.str());
  std::size_t rows = 0;
  std::int64_t a, b;
  std::string kind;
  while (in >> a >> b >> kind) {
    CHECK(a >= 0);
    CHECK(b >= 0);
    CHECK((kind == "timelike" || kind == "causal"));
    ++rows;
  }
  CHECK(rows == g.edge_count());
}

TEST_CASE("reports render deterministically with stable order") {
  auto make = [] {
    Report r;
    r.section("alpha");
    r.kv("nodes", std::size_t{42});
    r.kv("value", 0.1 + 0.2);
    r.check("acyclic", true);
    r.section("beta");
    r.check("margin", false);
    return r;
  };
  const Report a = make(), b = make();
  CHECK(a.to_text() == b.to_text());
  CHECK(a.to_json() == b.to_json());
  CHECK_FALSE(a.all_passed());
  CHECK(a.failures() == 1);
  CHECK(a.to_text().find("[alpha]") != std::string::npos);
  CHECK(a.to_text().find("result = fail") != std::string::npos);
  CHECK(a.to_json().find("\"alpha.value\": \"0.30000000000000004\"") != std::string::npos);
}
