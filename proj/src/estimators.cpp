#include "tailci/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tailci/error.hpp"

namespace tailci {
namespace {

void check_threshold(const Sample& sample, int k) {
  const auto n = static_cast<long long>(sample.size());
  if (k < 1 || k > n - 1) {
    throw Error(ErrorKind::bounds, "threshold k=" + std::to_string(k) +
                                       " outside [1, " + std::to_string(n - 1) + "]");
  }
  // Y_{n:n-k} is the smallest order statistic used; descending order makes
  // it positive iff all of the top k+1 are.
  if (sample.positive_count() < static_cast<std::size_t>(k) + 1) {
    throw Error(ErrorKind::domain,
                "nonpositive order statistic among the top " + std::to_string(k + 1));
  }
}

// Shared by hill() and hill_path() so that both produce identical bits.
double hill_kernel(std::span<const double> log_desc, int k) {
  const double anchor = log_desc[static_cast<std::size_t>(k)];
  double sum = 0.0;
  for (int j = 0; j < k; ++j) sum += log_desc[static_cast<std::size_t>(j)] - anchor;
  return sum / k;
}

}  // namespace

double order_statistic(const Sample& sample, int j) {
  if (j < 0 || static_cast<std::size_t>(j) >= sample.size()) {
    throw Error(ErrorKind::bounds, "order statistic index " + std::to_string(j) +
                                       " outside [0, " +
                                       std::to_string(sample.size() - 1) + "]");
  }
  return sample.sorted_desc()[static_cast<std::size_t>(j)];
}

TailIndexEstimate hill(const Sample& sample, int k) {
  check_threshold(sample, k);
  return {hill_kernel(sample.log_desc(), k), k, sample.size()};
}

std::vector<TailIndexEstimate> hill_path(const Sample& sample, int k_lo, int k_hi) {
  if (k_lo > k_hi) {
    throw Error(ErrorKind::bounds, "empty threshold range [" + std::to_string(k_lo) +
                                       ", " + std::to_string(k_hi) + "]");
  }
  check_threshold(sample, k_lo);
  check_threshold(sample, k_hi);
  std::vector<TailIndexEstimate> path;
  path.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (int k = k_lo; k <= k_hi; ++k) {
    path.push_back({hill_kernel(sample.log_desc(), k), k, sample.size()});
  }
  return path;
}

QuantileEstimate weissman_quantile(const Sample& sample, int k, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::config, "tail probability p must lie in (0, 1)");
  }
  const double np = static_cast<double>(sample.size()) * p;
  if (!(np < k)) {
    throw Error(ErrorKind::extrapolation,
                "n*p = " + std::to_string(np) + " must be smaller than k = " +
                    std::to_string(k));
  }
  const TailIndexEstimate xi = hill(sample, k);
  const double anchor = order_statistic(sample, k);
  const double q_hat = anchor * std::pow(static_cast<double>(k) / np, xi.xi_hat);
  return {q_hat, p, k, xi};
}

LeftTailSample left_tail_transform(std::span<const double> values, double cutoff) {
  if (!std::isfinite(cutoff)) {
    throw Error(ErrorKind::config, "left-tail cutoff must be finite");
  }
  std::vector<double> reflected;
  reflected.reserve(values.size());
  std::size_t dropped = 0;
  for (double b : values) {
    if (b < cutoff) {
      reflected.push_back(cutoff - b);
    } else {
      ++dropped;
    }
  }
  if (reflected.size() < 2) {
    throw Error(ErrorKind::empty_sample,
                "fewer than 2 observations below cutoff " + std::to_string(cutoff));
  }
  return {Sample(std::move(reflected)), dropped};
}

Interval restore_left_tail_interval(const Interval& interval, double cutoff,
                                    double clamp_at) {
  Interval out = interval;
  if (interval.empty) return out;
  if (!(interval.lo <= interval.hi)) {
    throw Error(ErrorKind::domain, "invalid interval: lo > hi");
  }
  const double lo = cutoff - interval.hi;
  const double hi = cutoff - interval.lo;
  out.lo = std::max(clamp_at, lo);
  out.hi = std::max(clamp_at, hi);
  out.lower_clamped = lo < clamp_at;
  out.center = cutoff - interval.center;
  return out;
}

}  // namespace tailci
