#include <doctest.h>

#include <sstream>
#include <vector>

#include "dvsim/channel.hpp"
#include "dvsim/engine.hpp"
#include "dvsim/topology.hpp"

using namespace dvsim;

TEST_CASE("events fire in time then insertion order") {
  Engine e;
  std::vector<int> order;
  e.schedule(seconds(2), [&] { order.push_back(3); });
  e.schedule(seconds(1), [&] { order.push_back(1); });
  e.schedule(seconds(1), [&] { order.push_back(2); });
  e.run_until(seconds(5));
  CHECK(order == std::vector<int>{1, 2, 3});
  CHECK(e.now() == seconds(5));
  CHECK(e.processed() == 3);
}

TEST_CASE("scheduling at now fires before later events") {
  Engine e;
  std::vector<int> order;
  e.schedule(seconds(1), [&] {
    e.schedule(seconds(1.5), [&] { order.push_back(2); });
    e.schedule(e.now(), [&] { order.push_back(1); });
  });
  e.run_until(seconds(2));
  CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("cancelled events never fire") {
  Engine e;
  bool fired = false;
  auto h = e.schedule(seconds(1), [&] { fired = true; });
  CHECK(e.pending() == 1);
  e.cancel(h);
  CHECK(e.pending() == 0);
  e.run_until(seconds(2));
  CHECK_FALSE(fired);
}

TEST_CASE("empty queue advances the clock") {
  Engine e;
  e.run_until(seconds(900));
  CHECK(e.now() == seconds(900));
}

TEST_CASE("scheduling into the past throws") {
  Engine e;
  e.run_until(seconds(10));
  CHECK_THROWS_AS(e.schedule(seconds(5), [] {}), std::logic_error);
}

TEST_CASE("1 Hz timer over 900 s fires 900 times") {
  Engine e;
  int fires = 0;
  std::function<void()> tick = [&] {
    ++fires;
    e.schedule_in(seconds(1), tick);
  };
  e.schedule(seconds(1), tick);
  e.run_until(seconds(900));
  CHECK(fires == 900);
}

namespace {

PacketPtr data_packet(NodeId src, NodeId dst, std::uint64_t uid) {
  auto p = std::make_shared<Packet>();
  p->kind = PacketKind::kData;
  p->size = 640;
  p->src = src;
  p->dst = dst;
  p->uid = uid;
  return p;
}

}  // namespace

TEST_CASE("perfect link delivers after airtime plus propagation") {
  LinkModel m;
  m.bandwidth_max_bps = 10e6;
  const Topology t({{0, 0}, {10, 0}}, {100, 100}, m);
  Engine e;
  Channel ch(t, e, 1);
  SimTime arrival;
  int got = 0;
  ch.set_receiver([&](NodeId, const PacketPtr&) {
    ++got;
    arrival = e.now();
  });
  CHECK(ch.unicast(data_packet(0, 1, 1)));
  e.run_until(seconds(1));
  CHECK(got == 1);
  CHECK(arrival == seconds(640 * 8 / 10e6) + seconds(1e-6));
}

TEST_CASE("zero-probability link never delivers") {
  const Topology t({{0, 0}, {10, 0}}, {100, 100}, LinkModel{});
  Engine e;
  Channel ch(t, e, 1);
  ch.fail_link(0, 1);
  int got = 0;
  ch.set_receiver([&](NodeId, const PacketPtr&) { ++got; });
  for (int i = 0; i < 100; ++i) ch.unicast(data_packet(0, 1, i));
  CHECK_FALSE(ch.send_reliable(data_packet(0, 1, 1000), 3).delivered);
  e.run_until(seconds(10));
  CHECK(got == 0);
  ch.restore_link(0, 1);
  CHECK(ch.probability(0, 1) == 1.0);
}

TEST_CASE("delivered fraction follows link probability") {
  LinkModel m;
  // p = 0.7 at 145 m: 1 - (145-100)/150.
  const Topology t({{0, 0}, {145, 0}}, {200, 200}, m);
  REQUIRE(t.delivery_probability(0, 1) == doctest::Approx(0.7));
  Engine e;
  Channel ch(t, e, 9);
  int got = 0;
  ch.set_receiver([&](NodeId, const PacketPtr&) { ++got; });
  for (int i = 0; i < 10000; ++i) ch.unicast(data_packet(0, 1, i));
  e.run_until(seconds(100));
  CHECK(got / 10000.0 == doctest::Approx(0.7).epsilon(0.02 / 0.7));
}

TEST_CASE("reliable send retries up to the limit") {
  const Topology t({{0, 0}, {145, 0}}, {200, 200}, LinkModel{});
  Engine e;
  Channel ch(t, e, 4);
  int got = 0;
  ch.set_receiver([&](NodeId, const PacketPtr&) { ++got; });
  int delivered = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto o = ch.send_reliable(data_packet(0, 1, i), 3);
    CHECK(o.attempts >= 1);
    CHECK(o.attempts <= 4);
    delivered += o.delivered;
  }
  e.run_until(seconds(100));
  CHECK(got == delivered);
  // 1 - 0.3^4 with retries.
  CHECK(delivered / 2000.0 == doctest::Approx(1 - 0.0081).epsilon(0.02));
}

TEST_CASE("channel trace is reproducible") {
  const auto t = build_random_topology(10, {300, 300}, LinkModel{}, 3);
  auto run = [&] {
    Engine e;
    Channel ch(t, e, 77);
    std::ostringstream os;
    ch.set_trace(&os);
    ch.set_receiver([](NodeId, const PacketPtr&) {});
    for (NodeId i = 0; i < 10; ++i) {
      auto p = data_packet(i, kBroadcast, i);
      ch.broadcast(p);
    }
    e.run_until(seconds(1));
    return os.str();
  };
  CHECK(run() == run());
}
