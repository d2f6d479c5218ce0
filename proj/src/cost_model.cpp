#include "dvsim/cost_model.hpp"

#include <cmath>
#include <istream>
#include <stdexcept>

#include "dvsim/text.hpp"

namespace dvsim::cost {
namespace {

void require_valid(const CostParams& p) {
  const auto errors = p.validate();
  if (!errors.empty()) throw std::invalid_argument("cost params: " + errors.front());
}

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

std::vector<std::string> CostParams::validate() const {
  std::vector<std::string> e;
  if (!is_probability(p_err)) e.push_back("p_err must be in [0,1]");
  if (!(d_avg >= 0.0)) e.push_back("d_avg must be >= 0");
  if (h < 1) e.push_back("h must be >= 1");
  if (h >= 1 && d_f.size() < static_cast<std::size_t>(h - 1)) {
    e.push_back("d_f needs h-1 = " + std::to_string(h - 1) + " values");
  }
  for (double v : d_f) {
    if (!is_probability(v)) e.push_back("d_f values must be in [0,1]");
  }
  if (m < 0) e.push_back("m must be >= 0");
  if (n < 0) e.push_back("n must be >= 0");
  if (p_nlb.size() < static_cast<std::size_t>(std::max(n, 0)) && !p_nlb.empty()) {
    e.push_back("p_nlb needs n values (or none for all zero)");
  }
  for (double v : p_nlb) {
    if (!is_probability(v)) e.push_back("p_nlb values must be in [0,1]");
  }
  for (double v : {tau1, tau2, alpha_df, alpha_dr, alpha_s_probes, alpha_l_probes, tau_nl}) {
    if (!(v >= 0.0)) {
      e.push_back("rates and times must be >= 0");
      break;
    }
  }
  return e;
}

double flood_integrand(const CostParams& p) {
  double sum = 0.0;
  double err_pow = 1.0;
  double df_prod = 1.0;
  for (int i = 0; i <= p.h - 1; ++i) {
    err_pow *= p.p_err;
    if (i >= 1) df_prod *= p.d_f[static_cast<std::size_t>(i - 1)];
    sum += err_pow * df_prod;
  }
  return p.p_err * p.d_avg + p.d_avg * sum;
}

double c_per(const CostParams& p) {
  require_valid(p);
  return flood_integrand(p) * p.tau1;
}

double c_tri(const CostParams& p) {
  require_valid(p);
  double node_sum = 0.0;
  for (int k = 0; k < p.n; ++k) {
    const double nlb = p.p_nlb.empty() ? 0.0 : p.p_nlb[static_cast<std::size_t>(k)];
    node_sum += 1.0 - nlb;
  }
  return static_cast<double>(p.m) * node_sum * flood_integrand(p) * p.tau2;
}

double c_qlm_etx_family(double alpha_df, double alpha_dr, double tau_nl) {
  return (alpha_df + alpha_dr) * tau_nl;
}

double c_qlm_ett(const CostParams& p) {
  return c_qlm_etx_family(p.alpha_df, p.alpha_dr, p.tau_nl) +
         (p.alpha_s_probes + p.alpha_l_probes) * p.tau_nl;
}

double c_qlm_md(double alpha_df, double tau_nl) { return 2.0 * alpha_df * tau_nl; }

double c_metric(MetricKind kind, const CostParams& p) {
  switch (kind) {
    case MetricKind::kHop: return 0.0;
    case MetricKind::kEtx:
    case MetricKind::kInvEtx:
    case MetricKind::kMl: return c_qlm_etx_family(p.alpha_df, p.alpha_dr, p.tau_nl);
    case MetricKind::kEtt: return c_qlm_ett(p);
    case MetricKind::kMd: return c_qlm_md(p.alpha_df, p.tau_nl);
  }
  return 0.0;
}

CostBreakdown c_total(MetricKind kind, const CostParams& p) {
  CostBreakdown b;
  b.c_per = c_per(p);
  b.c_tri = c_tri(p);
  b.c_metric = c_metric(kind, p);
  b.c_total = b.c_per + b.c_tri + b.c_metric;
  return b;
}

CostParams read_params(std::istream& is) {
  CostParams p;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("params line " + std::to_string(line_no) + ": " + what);
  };
  auto list = [&](std::string_view v) {
    std::vector<double> out;
    if (text::trim(v).empty()) return out;
    for (auto part : text::split(v, ',')) {
      auto d = text::parse_double(part);
      if (!d) fail("bad number '" + std::string(part) + "'");
      out.push_back(*d);
    }
    return out;
  };
  while (std::getline(is, line)) {
    ++line_no;
    auto body = text::trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    const auto key = text::trim(body.substr(0, eq));
    const auto value = text::trim(body.substr(eq + 1));
    auto num = [&] {
      auto d = text::parse_double(value);
      if (!d) fail("bad number for " + std::string(key));
      return *d;
    };
    if (key == "p_err") p.p_err = num();
    else if (key == "d_avg") p.d_avg = num();
    else if (key == "h") p.h = static_cast<int>(num());
    else if (key == "d_f") p.d_f = list(value);
    else if (key == "m") p.m = static_cast<int>(num());
    else if (key == "n") p.n = static_cast<int>(num());
    else if (key == "p_nlb") p.p_nlb = list(value);
    else if (key == "tau1") p.tau1 = num();
    else if (key == "tau2") p.tau2 = num();
    else if (key == "alpha_df") p.alpha_df = num();
    else if (key == "alpha_dr") p.alpha_dr = num();
    else if (key == "alpha_s_probes") p.alpha_s_probes = num();
    else if (key == "alpha_l_probes") p.alpha_l_probes = num();
    else if (key == "tau_nl") p.tau_nl = num();
    else fail("unknown key '" + std::string(key) + "'");
  }
  return p;
}

}  // namespace dvsim::cost
