#pragma once

#include <vector>

#include "tailci/sample.hpp"

namespace tailci {

/// Normalized log-spacings: z[i] = (i+1) * log(Y_{n:n-i} / Y_{n:n-i-1}),
/// i = 0..count-1. Under an exact Pareto tail these are i.i.d. exponential
/// with mean xi. `count` defaults to n-1.
std::vector<double> spacings(const Sample& sample, int count = -1);

/// Antisymmetric weights w_j = k - 2j + 1, j = 1..k.
std::vector<double> guillou_weights(int k);

/// Standardized weighted spacing sum
///   T_k = (sum w_j^2)^{-1/2} * xi_hat(n,k)^{-1} * sum_{j<=k} w_j Z_j.
double t_statistic(const Sample& sample, int k);

/// T_t for every t in [2, t_max] via prefix sums; entry t-2 holds T_t.
/// Agrees with t_statistic() up to roundoff.
std::vector<double> t_statistic_path(const Sample& sample, int t_max);

/// Root mean square of T over the window [k - l, k + l], l = floor(k/2),
/// truncated to the valid thresholds [2, t_max(sample)].
double c_criterion(const Sample& sample, int k);

struct SelectionConfig {
  double c_crit = 1.25;
  double k_min_frac = 0.01;
  double k_max_frac = 0.99;
};

struct Selection {
  int k = 0;
  bool fallback = false;  // rule never satisfied; k is the upper bound
  int k_lower = 0;
  int k_upper = 0;
  std::vector<double> c_trace;  // C_t for t = k_lower..k_upper
};

/// Smallest k in the bracket such that C_t > c_crit for all bracketed t >= k.
Selection select_k(const Sample& sample, const SelectionConfig& cfg = {});

/// Largest threshold usable by the diagnostic (needs positive order
/// statistics through Y_{n:n-t}).
int max_valid_threshold(const Sample& sample) noexcept;

}  // namespace tailci
