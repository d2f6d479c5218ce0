#include <doctest.h>

#include "dvsim/stats.hpp"
#include "dvsim/traffic.hpp"

using namespace dvsim;

TEST_CASE("throughput arithmetic") {
  RunStats s;
  CHECK(throughput(s, seconds(900)) == 0.0);
  s.packet_size = 640;
  s.data_delivered = 900;
  CHECK(throughput(s, seconds(900)) == 5120.0);
}

TEST_CASE("mean delay and absent values") {
  RunStats s;
  CHECK_FALSE(e2ed(s));
  CHECK_FALSE(nrl(s));
  s.data_sent = 2;
  s.data_delivered = 2;
  s.delays = {{1, seconds(1), seconds(1.002)}, {2, seconds(2), seconds(2.004)}};
  CHECK(*e2ed(s) == doctest::Approx(0.003).epsilon(1e-9));
  CHECK(*nrl(s) == 0.0);
}

TEST_CASE("normalized routing load") {
  RunStats s;
  s.data_delivered = 900;
  s.routing_packets_sent = 1800;
  CHECK(*nrl(s) == 2.0);
}

TEST_CASE("audit catches broken conservation") {
  RunStats s;
  s.warmup = seconds(30);
  s.data_sent = 10;
  s.data_delivered = 7;
  for (int i = 0; i < 7; ++i) s.delays.push_back({std::uint64_t(i), seconds(1), seconds(2)});
  s.record_drop(DropCause::kNoRoute);
  s.record_drop(DropCause::kRetryExhausted);
  s.record_drop(DropCause::kInFlight);
  s.record_routing(PacketKind::kMetricProbe, seconds(1));
  s.record_routing(PacketKind::kRouteUpdateFull, seconds(40));
  CHECK(s.audit().empty());
  CHECK(s.steady_routing == 1);
  s.record_drop(DropCause::kTtl);
  CHECK_FALSE(s.audit().empty());
}

TEST_CASE("routing counters decompose by kind") {
  RoutingCounters c;
  c.count(PacketKind::kMetricProbe);
  c.count(PacketKind::kPairProbeSmall);
  c.count(PacketKind::kPairProbeLarge);
  c.count(PacketKind::kPairAck);
  c.count(PacketKind::kRouteUpdateFull);
  c.count(PacketKind::kRouteUpdateIncremental);
  CHECK(c.metric_probes == 1);
  CHECK(c.pair_probes == 2);
  CHECK(c.pair_acks == 1);
  CHECK(c.total() == 6);
}

TEST_CASE("drop cause names") {
  CHECK(to_string(DropCause::kNoRoute) == "no_route");
  CHECK(to_string(DropCause::kInFlight) == "in_flight");
}

TEST_CASE("flow pairs are distinct and reproducible") {
  const auto a = start_flows(50, 20, 5, 640, seconds(1), seconds(900), 3);
  CHECK(a.size() == 20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].rate == 5.0);
    CHECK(a[i].src != a[i].dst);
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      CHECK_FALSE((a[i].src == a[j].src && a[i].dst == a[j].dst));
    }
  }
  const auto b = start_flows(50, 20, 5, 640, seconds(1), seconds(900), 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].src == b[i].src);
    CHECK(a[i].dst == b[i].dst);
  }
  const auto two = start_flows(2, 1, 1, 640, seconds(1), seconds(10), 1);
  CHECK(two.size() == 1);
  CHECK(two[0].src != two[0].dst);
  CHECK(start_flows(3, 6, 1, 640, seconds(1), seconds(10), 1).size() == 6);
  CHECK_THROWS_AS(start_flows(3, 7, 1, 640, seconds(1), seconds(10), 1), std::invalid_argument);
  CHECK_THROWS_AS(start_flows(3, 1, 0, 640, seconds(1), seconds(10), 1), std::invalid_argument);
}
