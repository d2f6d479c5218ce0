#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dvsim/metrics.hpp"

namespace dvsim::cost {

/// Inputs of the DSDV routing-overhead cost model. Integrands carry no time
/// dependence, so every integral is integrand × horizon.
struct CostParams {
  double p_err = 0.0;
  double d_avg = 0.0;
  int h = 1;
  /// Per-hop forwarding ratios d_f[1..h-1]; index 0 holds d_f[1].
  std::vector<double> d_f;
  int m = 0;
  int n = 0;
  /// Per-node probabilities P_nlb[1..n]; index 0 holds P_nlb[1].
  std::vector<double> p_nlb;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double alpha_df = 0.0;
  double alpha_dr = 0.0;
  double alpha_s_probes = 0.0;
  double alpha_l_probes = 0.0;
  double tau_nl = 0.0;

  /// Violated constraints, empty when valid.
  std::vector<std::string> validate() const;
};

struct CostBreakdown {
  double c_per = 0.0;
  double c_tri = 0.0;
  double c_metric = 0.0;
  double c_total = 0.0;
};

/// P_err·d_avg + d_avg·Σ_{i=0}^{h-1} P_err^{i+1} Π_{j=1}^{i} d_f[j]
double flood_integrand(const CostParams& p);

/// Periodic full-dump cost over [0, τ1]. Throws std::invalid_argument on
/// invalid params (h < 1 included).
double c_per(const CostParams& p);
/// Triggered-update cost over [0, τ2], summed over M events and N nodes.
double c_tri(const CostParams& p);

/// (α_df + α_dr)·τ_NL
double c_qlm_etx_family(double alpha_df, double alpha_dr, double tau_nl);
/// ETX-family cost plus (α_s + α_l)·τ_NL for the packet pairs.
double c_qlm_ett(const CostParams& p);
/// 2·α_df·τ_NL
double c_qlm_md(double alpha_df, double tau_nl);

/// Probe-measurement term for `kind`; zero for hop count.
double c_metric(MetricKind kind, const CostParams& p);

/// All terms; c_total is computed as their sum.
CostBreakdown c_total(MetricKind kind, const CostParams& p);

/// key = value file; lists are comma separated. Throws std::runtime_error.
CostParams read_params(std::istream& is);

}  // namespace dvsim::cost
