#include <doctest.h>

#include <sstream>

#include "dvsim/random.hpp"
#include "dvsim/topology.hpp"

using namespace dvsim;

TEST_CASE("random topology stays inside the area") {
  const auto t = build_random_topology(50, {1000, 1000}, LinkModel{}, 7);
  CHECK(t.size() == 50);
  for (const auto& p : t.positions()) {
    CHECK(p.x >= 0.0);
    CHECK(p.x <= 1000.0);
    CHECK(p.y >= 0.0);
    CHECK(p.y <= 1000.0);
  }
}

TEST_CASE("two nodes in a small square are neighbors") {
  LinkModel m;
  m.comm_range_m = 20;
  m.inner_range_m = 10;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto t = build_random_topology(2, {10, 10}, m, seed);
    REQUIRE(t.neighbors(0).size() == 1);
    CHECK(t.neighbors(0)[0] == 1);
    CHECK(t.neighbors(1)[0] == 0);
  }
}

TEST_CASE("same seed gives identical topology text") {
  std::ostringstream a;
  std::ostringstream b;
  LinkModel m;
  m.asymmetry_fraction = 0.3;
  write_topology(a, build_random_topology(30, {800, 600}, m, 11));
  write_topology(b, build_random_topology(30, {800, 600}, m, 11));
  CHECK(a.str() == b.str());
  std::ostringstream c;
  write_topology(c, build_random_topology(30, {800, 600}, m, 12));
  CHECK(a.str() != c.str());
}

TEST_CASE("topology write/read round trip") {
  LinkModel m;
  m.asymmetry_fraction = 0.5;
  const auto t = build_random_topology(25, {500, 500}, m, 3);
  std::stringstream s;
  write_topology(s, t);
  const auto r = read_topology(s);
  REQUIRE(r.size() == t.size());
  CHECK(r.link_model() == t.link_model());
  for (NodeId a = 0; a < t.size(); ++a) {
    for (NodeId b = 0; b < t.size(); ++b) {
      CHECK(r.delivery_probability(a, b) == t.delivery_probability(a, b));
    }
  }
}

TEST_CASE("delivery probability shape") {
  LinkModel m;
  CHECK(m.probability_at(0.0) == 1.0);
  CHECK(m.probability_at(100.0) == 1.0);
  CHECK(m.probability_at(175.0) == doctest::Approx(0.5));
  CHECK(m.probability_at(250.0) == 0.0);
  CHECK(m.probability_at(300.0) == 0.0);
  CHECK(m.bandwidth_at(50.0) == 11e6);
  CHECK(m.bandwidth_at(175.0) == doctest::Approx(6.5e6));

  const Topology t({{0, 0}, {0, 0}, {400, 0}}, {500, 500}, m);
  CHECK(t.delivery_probability(0, 1) == 1.0);
  CHECK(t.delivery_probability(0, 2) == 0.0);
  CHECK(t.neighbors(2).empty());
  CHECK(t.delivery_probability(1, 1) == 1.0);
}

TEST_CASE("symmetric model gives symmetric links and neighbor sets") {
  const auto t = build_random_topology(50, {1000, 1000}, LinkModel{}, 5);
  for (NodeId a = 0; a < t.size(); ++a) {
    for (NodeId b = 0; b < t.size(); ++b) {
      CHECK(t.delivery_probability(a, b) == t.delivery_probability(b, a));
      CHECK(t.in_range(a, b) == t.in_range(b, a));
    }
  }
}

TEST_CASE("asymmetric links scale one direction") {
  LinkModel m;
  m.asymmetry_fraction = 1.0;
  m.asymmetry_factor = 0.3;
  const Topology base({{0, 0}, {50, 0}}, {100, 100}, m, {{0, 1, 0.3}});
  CHECK(base.delivery_probability(0, 1) == doctest::Approx(0.3));
  CHECK(base.delivery_probability(1, 0) == 1.0);
  const auto t = build_random_topology(20, {300, 300}, m, 2);
  CHECK_FALSE(t.asymmetric_links().empty());
  for (const auto& a : t.asymmetric_links()) {
    CHECK(t.delivery_probability(a.from, a.to) <
          t.delivery_probability(a.to, a.from) + 1e-12);
  }
}

TEST_CASE("invalid topology requests") {
  CHECK_THROWS_AS(build_random_topology(1, {10, 10}, LinkModel{}, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_random_topology(5, {0, 10}, LinkModel{}, 1), std::invalid_argument);
  std::istringstream junk("area 10\nnode x y\n");
  CHECK_THROWS(read_topology(junk));
}

TEST_CASE("random streams are independent and reproducible") {
  auto a = make_stream(42, 3, Stream::kChannel);
  auto b = make_stream(42, 3, Stream::kChannel);
  auto c = make_stream(42, 3, Stream::kTimers);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(a);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}
