#include <doctest.h>

#include <sstream>

#include "dvsim/cost_model.hpp"
#include "dvsim/random.hpp"

using namespace dvsim;
using namespace dvsim::cost;

TEST_CASE("periodic cost") {
  CostParams p;
  p.h = 1;
  p.p_err = 0.5;
  p.d_avg = 4;
  p.tau1 = 1;
  CHECK(c_per(p) == 4.0);
  p.tau1 = 2;
  CHECK(c_per(p) == 8.0);
  p.p_err = 0;
  CHECK(c_per(p) == 0.0);
  p.h = 0;
  CHECK_THROWS_AS(c_per(p), std::invalid_argument);
}

TEST_CASE("flood integrand with several hops") {
  CostParams p;
  p.h = 3;
  p.p_err = 0.5;
  p.d_avg = 2;
  p.d_f = {0.8, 0.6};
  // 0.5*2 + 2*(0.5 + 0.25*0.8 + 0.125*0.8*0.6)
  CHECK(flood_integrand(p) == doctest::Approx(1.0 + 2 * (0.5 + 0.2 + 0.06)).epsilon(1e-12));
}

TEST_CASE("triggered cost") {
  CostParams p;
  p.h = 1;
  p.p_err = 0.5;
  p.d_avg = 4;
  p.tau2 = 1;
  p.m = 0;
  p.n = 1;
  CHECK(c_tri(p) == 0.0);
  p.m = 1;
  CHECK(c_tri(p) == 4.0);
  p.p_nlb = {1.0};
  CHECK(c_tri(p) == 0.0);
  p.n = 3;
  p.m = 2;
  p.p_nlb = {0.0, 0.5, 1.0};
  CHECK(c_tri(p) == doctest::Approx(2 * 1.5 * 4.0));
}

TEST_CASE("probe cost closed forms") {
  CHECK(c_qlm_etx_family(1, 1, 900) == 1800.0);
  CHECK(c_qlm_etx_family(0, 0, 12345) == 0.0);
  CHECK(c_qlm_md(1, 900) == 1800.0);
  CHECK(c_qlm_md(0, 900) == 0.0);
  CostParams p;
  p.alpha_df = p.alpha_dr = 1;
  p.tau_nl = 900;
  CHECK(c_qlm_ett(p) == 1800.0);
  p.alpha_s_probes = p.alpha_l_probes = 1.0 / 60;
  CHECK(c_qlm_ett(p) == doctest::Approx(1830.0).epsilon(1e-12));
  CHECK(c_qlm_md(1.0 / 60, 900) < c_qlm_ett(p));
}

TEST_CASE("breakdown is additive and hop pays no probes") {
  CostParams p;
  CHECK(c_total(MetricKind::kEtx, p).c_total == 0.0);
  Rng rng = make_stream(1, 0, Stream::kTopology);
  for (int i = 0; i < 200; ++i) {
    p.h = 1 + static_cast<int>(rng() % 4);
    p.p_err = uniform01(rng);
    p.d_avg = 10 * uniform01(rng);
    p.d_f.assign(p.h - 1, uniform01(rng));
    p.m = static_cast<int>(rng() % 5);
    p.n = static_cast<int>(rng() % 5);
    p.p_nlb.assign(p.n, uniform01(rng));
    p.tau1 = 1000 * uniform01(rng);
    p.tau2 = 1000 * uniform01(rng);
    p.alpha_df = uniform01(rng);
    p.alpha_dr = uniform01(rng);
    p.alpha_s_probes = uniform01(rng);
    p.alpha_l_probes = uniform01(rng);
    p.tau_nl = 1000 * uniform01(rng);
    for (auto k : kAllMetrics) {
      const auto b = c_total(k, p);
      CHECK(b.c_total == b.c_per + b.c_tri + b.c_metric);
    }
    CHECK(c_total(MetricKind::kHop, p).c_metric == 0.0);
    CHECK(c_qlm_ett(p) >= c_qlm_etx_family(p.alpha_df, p.alpha_dr, p.tau_nl));
    CHECK(c_total(MetricKind::kEtt, p).c_metric >= c_total(MetricKind::kEtx, p).c_metric);
  }
}

TEST_CASE("invalid parameters") {
  CostParams p;
  p.p_err = 1.5;
  CHECK_FALSE(p.validate().empty());
  CHECK_THROWS_AS(c_per(p), std::invalid_argument);
  p.p_err = 0.5;
  p.tau1 = -1;
  CHECK_THROWS_AS(c_per(p), std::invalid_argument);
}

TEST_CASE("parameter file") {
  std::istringstream in(
      "# sample\n"
      "p_err = 0.5\n"
      "d_avg = 4\n"
      "h = 3\n"
      "d_f = 0.9, 0.8\n"
      "alpha_df = 1\n"
      "alpha_dr = 1\n"
      "tau_nl = 900\n");
  const auto p = read_params(in);
  CHECK(p.h == 3);
  CHECK(p.d_f.size() == 2);
  CHECK(c_metric(MetricKind::kEtx, p) == 1800.0);
  std::istringstream bad("nonsense = 1\n");
  CHECK_THROWS(read_params(bad));
}
