#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dvsim/random.hpp"
#include "dvsim/routing_table.hpp"
#include "oracle.hpp"

using namespace dvsim;

namespace {

RouteAdvert advert(NodeId dest, double metric, std::uint32_t seq, std::uint32_t hops = 1) {
  return {dest, metric, hops, seq, {}};
}

const Comparator kEtx = comparator_for(MetricKind::kEtx);
const Comparator kMl = comparator_for(MetricKind::kMl);

}  // namespace

TEST_CASE("own entry is the identity route") {
  RoutingTable t(2, 4, kEtx);
  CHECK(t.next_hop(2) == NodeId{2});
  CHECK(t.entry(2)->metric == 0.0);
  RoutingTable m(0, 2, kMl);
  CHECK(m.entry(0)->metric == 1.0);
  CHECK_FALSE(t.next_hop(1));
}

TEST_CASE("own sequence number steps by two") {
  RoutingTable t(0, 2, kEtx);
  std::uint32_t last = t.own_seq();
  for (int i = 0; i < 5; ++i) {
    t.bump_own_seq(seconds(i));
    CHECK(t.own_seq() == last + 2);
    CHECK(t.own_seq() % 2 == 0);
    last = t.own_seq();
  }
}

TEST_CASE("additive candidate: 2.0 advertised over 1.5") {
  RoutingTable t(0, 3, kEtx);
  const RouteAdvert a[] = {advert(2, 2.0, 4)};
  CHECK(t.apply_update(1, 1.5, a, seconds(1)).adopted == 1);
  CHECK(t.entry(2)->metric == 3.5);
  CHECK(t.next_hop(2) == NodeId{1});
  CHECK(t.entry(2)->hop_count == 2);
}

TEST_CASE("multiplicative candidate: 0.9 advertised over 0.8") {
  RoutingTable t(0, 3, kMl);
  const RouteAdvert a[] = {advert(2, 0.9, 4)};
  t.apply_update(1, 0.8, a, seconds(1));
  CHECK(t.entry(2)->metric == doctest::Approx(0.72));
}

TEST_CASE("adoption rules") {
  RoutingTable t(0, 4, kEtx);
  const RouteAdvert first[] = {advert(3, 2.0, 4)};
  t.apply_update(1, 1.0, first, seconds(1));
  REQUIRE(t.next_hop(3) == NodeId{1});

  SUBCASE("equal seq and equal metric keeps the incumbent") {
    const RouteAdvert same[] = {advert(3, 2.0, 4)};
    CHECK(t.apply_update(2, 1.0, same, seconds(2)).adopted == 0);
    CHECK(t.next_hop(3) == NodeId{1});
  }
  SUBCASE("equal seq and better metric replaces") {
    const RouteAdvert better[] = {advert(3, 1.0, 4)};
    t.apply_update(2, 1.0, better, seconds(2));
    CHECK(t.next_hop(3) == NodeId{2});
    CHECK(t.entry(3)->metric == 2.0);
  }
  SUBCASE("newer seq replaces even when worse") {
    const RouteAdvert newer[] = {advert(3, 9.0, 6)};
    t.apply_update(2, 1.0, newer, seconds(2));
    CHECK(t.next_hop(3) == NodeId{2});
    CHECK(t.entry(3)->seq == 6);
  }
  SUBCASE("stale seq is ignored") {
    const RouteAdvert stale[] = {advert(3, 0.1, 2)};
    CHECK(t.apply_update(2, 0.1, stale, seconds(2)).adopted == 0);
    CHECK(t.next_hop(3) == NodeId{1});
  }
  SUBCASE("break report from the next hop invalidates the route") {
    const RouteAdvert broken[] = {advert(3, kEtx.worst(), 5)};
    const auto r = t.apply_update(1, 1.0, broken, seconds(2));
    CHECK(r.newly_broken == 1);
    CHECK_FALSE(t.next_hop(3));
    CHECK(t.entry(3)->seq == 5);
  }
  SUBCASE("break report from another neighbor is ignored") {
    const RouteAdvert broken[] = {advert(3, kEtx.worst(), 5)};
    CHECK(t.apply_update(2, 1.0, broken, seconds(2)).adopted == 0);
    CHECK(t.next_hop(3) == NodeId{1});
  }
  SUBCASE("unusable link ignores the advertisement") {
    const RouteAdvert better[] = {advert(3, 0.5, 8)};
    CHECK(t.apply_update(2, kEtx.worst(), better, seconds(2)).adopted == 0);
  }
}

TEST_CASE("seq numbers never go backwards") {
  RoutingTable t(0, 3, kEtx);
  Rng rng = make_stream(5, 0, Stream::kTimers);
  std::uint32_t last = 0;
  for (int i = 0; i < 500; ++i) {
    const auto seq = static_cast<std::uint32_t>(rng() % 40);
    const RouteAdvert a[] = {advert(2, 1.0 + static_cast<double>(rng() % 5), seq)};
    t.apply_update(1, 1.0, a, seconds(i));
    if (t.entry(2)) {
      CHECK(t.entry(2)->seq >= last);
      last = t.entry(2)->seq;
    }
  }
}

TEST_CASE("link break marks routes and feeds the incremental dump") {
  RoutingTable t(0, 4, kEtx);
  const RouteAdvert a[] = {advert(2, 1.0, 2), advert(3, 1.0, 2)};
  t.apply_update(1, 1.0, a, seconds(1));
  t.full_dump();
  CHECK(t.incremental_dump().empty());
  CHECK(t.has_active_route_via(1));
  CHECK_FALSE(t.has_active_route_via(2));
  CHECK(t.mark_broken_via(1, seconds(2)) == 2);
  CHECK_FALSE(t.next_hop(2));
  CHECK(t.entry(2)->seq == 3);
  CHECK(std::isinf(t.entry(2)->metric));
  const auto inc = t.incremental_dump();
  CHECK(inc.size() == 2);
  CHECK(t.incremental_dump().empty());
}

TEST_CASE("dump lists dest next metric seq time") {
  RoutingTable t(0, 2, kEtx);
  t.bump_own_seq(seconds(1));
  std::ostringstream os;
  t.dump(os, seconds(1));
  CHECK(os.str() == "# node 0 at 1.000000000\n0 0 0 2 1.000000000\n");
}

TEST_CASE("five-node line with equal links routes along the line") {
  auto cost = [](NodeId a, NodeId b) -> std::optional<double> {
    if (a + 1 == b || b + 1 == a) return 1.0;
    return std::nullopt;
  };
  const auto c = converge_frozen(5, kEtx, cost);
  REQUIRE(c.converged);
  for (NodeId s = 0; s < 5; ++s) {
    for (NodeId d = 0; d < 5; ++d) {
      if (s == d) continue;
      CHECK(c.tables[s].next_hop(d) == (d > s ? s + 1 : s - 1));
      CHECK(c.tables[s].entry(d)->metric == std::abs(static_cast<int>(d) - static_cast<int>(s)));
    }
  }
}

TEST_CASE("frozen convergence matches enumeration for minimize metrics") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng = make_stream(seed, 0, Stream::kTopology);
    const std::size_t n = 3 + rng() % 4;
    std::vector<std::optional<double>> w(n * n);
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = 0; b < n; ++b) {
        if (a != b && uniform01(rng) < 0.6) w[a * n + b] = 1.0 + 9.0 * uniform01(rng);
      }
    }
    auto cost = [&](NodeId a, NodeId b) { return w[a * n + b]; };
    for (auto kind : {MetricKind::kEtx, MetricKind::kMl}) {
      auto lc = cost;
      std::vector<std::optional<double>> p(n * n);
      for (std::size_t i = 0; i < n * n; ++i) {
        if (w[i]) p[i] = 1.0 / *w[i];
      }
      oracle::LinkCost link = kind == MetricKind::kMl
                                  ? oracle::LinkCost([&](NodeId a, NodeId b) { return p[a * n + b]; })
                                  : oracle::LinkCost(lc);
      const auto c = converge_frozen(n, comparator_for(kind), link);
      REQUIRE(c.converged);
      for (NodeId s = 0; s < n; ++s) {
        for (NodeId d = 0; d < n; ++d) {
          if (s == d) continue;
          const auto best = oracle::best_path(n, kind, link, s, d);
          const auto hop = c.tables[s].next_hop(d);
          CHECK(best.has_value() == hop.has_value());
          if (best && hop) {
            CHECK(c.tables[s].entry(d)->metric == doctest::Approx(best->value).epsilon(1e-9));
          }
        }
      }
    }
  }
}
