#include "tailci/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tailci/error.hpp"
#include "tailci/estimators.hpp"
#include "tailci/numeric.hpp"

namespace tailci {
namespace {

double weight_norm_sq(int k) {
  const double kk = k;
  return kk * (kk * kk - 1.0) / 3.0;
}

void check_config(const SelectionConfig& cfg) {
  if (!(cfg.c_crit > 1.0)) throw Error(ErrorKind::config, "c_crit must exceed 1");
  if (!(cfg.k_min_frac > 0.0 && cfg.k_max_frac < 1.0 && cfg.k_min_frac < cfg.k_max_frac)) {
    throw Error(ErrorKind::config, "need 0 < k_min_frac < k_max_frac < 1");
  }
}

}  // namespace

int max_valid_threshold(const Sample& sample) noexcept {
  const auto n = static_cast<int>(sample.size());
  const auto pos = static_cast<int>(sample.positive_count());
  return std::min(n - 1, pos - 1);
}

std::vector<double> spacings(const Sample& sample, int count) {
  const auto n = static_cast<int>(sample.size());
  if (count < 0) count = n - 1;
  if (count > n - 1) {
    throw Error(ErrorKind::bounds, "at most n-1 spacings exist");
  }
  if (count > max_valid_threshold(sample)) {
    throw Error(ErrorKind::domain, "spacings need positive order statistics");
  }
  const auto y = sample.sorted_desc();
  std::vector<double> z(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const auto u = static_cast<std::size_t>(i);
    z[u] = (i + 1) * std::log(y[u] / y[u + 1]);
  }
  return z;
}

std::vector<double> guillou_weights(int k) {
  if (k < 1) throw Error(ErrorKind::config, "weights need k >= 1");
  std::vector<double> w(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) w[static_cast<std::size_t>(j - 1)] = k - 2 * j + 1;
  return w;
}

double t_statistic(const Sample& sample, int k) {
  if (k < 2) {
    throw Error(ErrorKind::domain, "T_k needs k >= 2 (all weights vanish at k = 1)");
  }
  if (k > static_cast<int>(sample.size()) - 1) {
    throw Error(ErrorKind::bounds, "T_k needs k <= n-1");
  }
  const double xi = hill(sample, k).xi_hat;
  if (!(xi > 0.0)) {
    throw Error(ErrorKind::degenerate, "Hill estimate is zero at k=" + std::to_string(k));
  }
  const auto z = spacings(sample, k);
  const auto w = guillou_weights(k);
  double u = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) u += w[j] * z[j];
  return u / (std::sqrt(weight_norm_sq(k)) * xi);
}

std::vector<double> t_statistic_path(const Sample& sample, int t_max) {
  if (t_max < 2) throw Error(ErrorKind::bounds, "T path needs t_max >= 2");
  const auto z = spacings(sample, t_max);
  std::vector<double> out(static_cast<std::size_t>(t_max - 1));
  // U_t = sum (t + 1 - 2j) Z_j = (t + 1) S1 - 2 S2; xi_hat(n,t) = S1 / t.
  double s1 = 0.0;
  double s2 = 0.0;
  for (int t = 1; t <= t_max; ++t) {
    const double zt = z[static_cast<std::size_t>(t - 1)];
    s1 += zt;
    s2 += t * zt;
    if (t < 2) continue;
    const double xi = s1 / t;
    if (!(xi > 0.0)) {
      throw Error(ErrorKind::degenerate, "Hill estimate is zero at k=" + std::to_string(t));
    }
    const double u = (t + 1) * s1 - 2.0 * s2;
    out[static_cast<std::size_t>(t - 2)] = u / (std::sqrt(weight_norm_sq(t)) * xi);
  }
  return out;
}

double c_criterion(const Sample& sample, int k) {
  const int t_max = max_valid_threshold(sample);
  const int half = k / 2;
  const int lo = std::max(2, k - half);
  const int hi = std::min(t_max, k + half);
  if (lo > hi) {
    throw Error(ErrorKind::domain, "no valid thresholds in the window around k=" +
                                       std::to_string(k));
  }
  double sum = 0.0;
  for (int t = lo; t <= hi; ++t) {
    const double tt = t_statistic(sample, t);
    sum += tt * tt;
  }
  return std::sqrt(sum / (hi - lo + 1));
}

Selection select_k(const Sample& sample, const SelectionConfig& cfg) {
  check_config(cfg);
  const double n = static_cast<double>(sample.size());
  const int t_max = max_valid_threshold(sample);

  Selection sel;
  sel.k_lower = std::max(2, ceil_index(cfg.k_min_frac * n));
  sel.k_upper = std::min(t_max, floor_index(cfg.k_max_frac * n));
  if (sel.k_lower > sel.k_upper) {
    throw Error(ErrorKind::config, "threshold bracket [" + std::to_string(sel.k_lower) +
                                       ", " + std::to_string(sel.k_upper) + "] is empty");
  }

  // Windows around the bracket reach up to k_upper + floor(k_upper/2).
  const int reach = std::min(t_max, sel.k_upper + sel.k_upper / 2);
  const auto t = t_statistic_path(sample, reach);
  std::vector<double> cum(t.size() + 1, 0.0);  // cum[i] = sum of T^2 for t = 2..i+1
  for (std::size_t i = 0; i < t.size(); ++i) cum[i + 1] = cum[i] + t[i] * t[i];

  sel.c_trace.reserve(static_cast<std::size_t>(sel.k_upper - sel.k_lower + 1));
  for (int k = sel.k_lower; k <= sel.k_upper; ++k) {
    const int lo = std::max(2, k - k / 2);
    const int hi = std::min(reach, k + k / 2);
    const double sum = cum[static_cast<std::size_t>(hi - 1)] - cum[static_cast<std::size_t>(lo - 2)];
    sel.c_trace.push_back(std::sqrt(sum / (hi - lo + 1)));
  }

  int last_fail = sel.k_lower - 1;
  for (int k = sel.k_upper; k >= sel.k_lower; --k) {
    if (!(sel.c_trace[static_cast<std::size_t>(k - sel.k_lower)] > cfg.c_crit)) {
      last_fail = k;
      break;
    }
  }
  if (last_fail == sel.k_upper) {
    sel.k = sel.k_upper;
    sel.fallback = true;
  } else {
    sel.k = last_fail + 1;
  }
  return sel;
}

}  // namespace tailci
