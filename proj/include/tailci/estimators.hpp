#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tailci/interval.hpp"
#include "tailci/sample.hpp"

namespace tailci {

struct TailIndexEstimate {
  double xi_hat = 0.0;
  int k = 0;
  std::size_t n = 0;
};

struct QuantileEstimate {
  double q_hat = 0.0;
  double p = 0.0;
  int k = 0;
  TailIndexEstimate xi_source;
};

/// Y_{n:n-j}, the (j+1)-th largest observation.
double order_statistic(const Sample& sample, int j);

/// Hill's estimator (1/k) sum_{j<k} [log Y_{n:n-j} - log Y_{n:n-k}].
TailIndexEstimate hill(const Sample& sample, int k);

/// Hill estimates for every integer k in [k_lo, k_hi].
std::vector<TailIndexEstimate> hill_path(const Sample& sample, int k_lo, int k_hi);

/// Weissman extrapolation Y_{n:n-k} * (k / (n p))^{xi_hat(n,k)}.
QuantileEstimate weissman_quantile(const Sample& sample, int k, double p);

struct LeftTailSample {
  Sample sample;
  std::size_t dropped = 0;  // observations with value >= cutoff
};

/// Reflects values below `cutoff` into the right tail: Y_i = cutoff - B_i.
LeftTailSample left_tail_transform(std::span<const double> values, double cutoff);

/// Maps an interval for cutoff - B back to B: [max(clamp_at, T - hi), T - lo].
Interval restore_left_tail_interval(const Interval& interval, double cutoff,
                                    double clamp_at);

}  // namespace tailci
