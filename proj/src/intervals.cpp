#include "tailci/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tailci/error.hpp"
#include "tailci/estimators.hpp"
#include "tailci/numeric.hpp"

namespace tailci {
namespace {

void check_critical(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw Error(ErrorKind::config, "critical value must be positive");
  }
}

Interval index_interval(Method method, const TailIndexEstimate& est, double half_width) {
  Interval iv;
  iv.method = method;
  iv.target = {Target::Kind::tail_index, 0.0};
  iv.k_lo = iv.k_hi = est.k;
  iv.center = iv.xi_hat = est.xi_hat;
  iv.lo = est.xi_hat - half_width;
  iv.hi = est.xi_hat + half_width;
  return iv;
}

Interval quantile_interval(Method method, const QuantileEstimate& est, double rel_half_width) {
  Interval iv;
  iv.method = method;
  iv.target = {Target::Kind::quantile, est.p};
  iv.k_lo = iv.k_hi = est.k;
  iv.center = est.q_hat;
  iv.xi_hat = est.xi_source.xi_hat;
  iv.lo = est.q_hat * (1.0 - rel_half_width);
  iv.hi = est.q_hat * (1.0 + rel_half_width);
  if (iv.lo < 0.0) {
    iv.lo = 0.0;
    iv.lower_clamped = true;
  }
  return iv;
}

double log_extrapolation_ratio(const Sample& sample, int k, double p) {
  const double ratio = k / (static_cast<double>(sample.size()) * p);
  if (!(ratio > 1.0)) {
    throw Error(ErrorKind::extrapolation,
                "k/(n p) = " + std::to_string(ratio) + " must exceed 1 at k=" +
                    std::to_string(k));
  }
  return std::log(ratio);
}

template <class PerK>
Interval intersect_grid(Method method, int k_bar, double r_lower, double q, PerK per_k) {
  check_critical(q);
  const auto [k_lo, k_hi] = snooping_grid(k_bar, r_lower);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  Interval last;
  for (int k = k_lo; k <= k_hi; ++k) {
    last = per_k(k);
    lo = std::max(lo, last.lo);
    hi = std::min(hi, last.hi);
  }
  Interval iv = last;  // target, center and xi_hat at k_bar
  iv.method = method;
  iv.k_lo = k_lo;
  iv.k_hi = k_hi;
  iv.q = q;
  iv.lower_clamped = false;
  if (lo > hi) {
    iv.empty = true;
    iv.lo = iv.hi = std::numeric_limits<double>::quiet_NaN();
  } else {
    iv.lo = lo;
    iv.hi = hi;
  }
  return iv;
}

}  // namespace

double worst_case_bias(double A, double rho, double r) {
  return A * std::pow(r, rho) / (1.0 + rho);
}

double bias_bound(double A, double rho) {
  if (!(rho > 0.0)) throw Error(ErrorKind::domain, "rho must be positive");
  if (!(A >= 0.0)) throw Error(ErrorKind::domain, "A must be nonnegative");
  return A / (1.0 + rho);
}

BiasBudget make_budget(double A, double rho) {
  return {A, rho, bias_bound(A, rho), BudgetSource::user};
}

BiasBudget rule_of_thumb_budget(double xi_hat, int k) {
  if (!(xi_hat > 0.0)) {
    throw Error(ErrorKind::domain, "rule-of-thumb budget needs a positive tail index estimate");
  }
  if (k < 1) throw Error(ErrorKind::bounds, "rule-of-thumb budget needs k >= 1");
  const double rho = 2.0 * xi_hat;
  const double A = 0.1 * xi_hat * (1.0 + 2.0 * xi_hat) * std::sqrt(static_cast<double>(k));
  return {A, rho, bias_bound(A, rho), BudgetSource::rule_of_thumb};
}

std::pair<int, int> snooping_grid(int k_bar, double r_lower) {
  if (!(r_lower > 0.0 && r_lower <= 1.0)) {
    throw Error(ErrorKind::config, "r_lower must lie in (0, 1]");
  }
  const int k_lo = std::max(1, ceil_index(r_lower * k_bar));
  if (k_bar < 1 || k_lo > k_bar) {
    throw Error(ErrorKind::config, "snooping grid is empty for k_bar=" + std::to_string(k_bar));
  }
  return {k_lo, k_bar};
}

Interval naive_ci_index(const Sample& sample, int k, double z) {
  check_critical(z);
  const auto est = hill(sample, k);
  Interval iv = index_interval(Method::HN, est, z * est.xi_hat / std::sqrt(static_cast<double>(k)));
  iv.q = z;
  return iv;
}

Interval honest_ci_index(const Sample& sample, int k, double q, const BiasBudget& budget) {
  check_critical(q);
  if (!(budget.bound >= 0.0)) throw Error(ErrorKind::domain, "bias bound must be nonnegative");
  const auto est = hill(sample, k);
  Interval iv = index_interval(Method::HO, est,
                               (est.xi_hat * q + budget.bound) / std::sqrt(static_cast<double>(k)));
  iv.q = q;
  iv.budget = budget;
  return iv;
}

Interval honest_ci_index(const Sample& sample, int k, double q) {
  return honest_ci_index(sample, k, q, rule_of_thumb_budget(hill(sample, k).xi_hat, k));
}

Interval snooping_ci_index(const Sample& sample, int k_bar, double r_lower, double q,
                           const std::optional<BiasBudget>& fixed_budget) {
  Interval iv = intersect_grid(Method::HS, k_bar, r_lower, q, [&](int k) {
    return fixed_budget ? honest_ci_index(sample, k, q, *fixed_budget)
                        : honest_ci_index(sample, k, q);
  });
  iv.budget = fixed_budget;
  return iv;
}

Interval naive_ci_quantile(const Sample& sample, int k, double p, double z) {
  check_critical(z);
  const auto est = weissman_quantile(sample, k, p);
  const double log_d = log_extrapolation_ratio(sample, k, p);
  Interval iv = quantile_interval(
      Method::IN, est, log_d * z * est.xi_source.xi_hat / std::sqrt(static_cast<double>(k)));
  iv.q = z;
  return iv;
}

Interval honest_ci_quantile(const Sample& sample, int k, double p, double q,
                            const BiasBudget& budget) {
  check_critical(q);
  if (!(budget.bound >= 0.0)) throw Error(ErrorKind::domain, "bias bound must be nonnegative");
  const auto est = weissman_quantile(sample, k, p);
  const double log_d = log_extrapolation_ratio(sample, k, p);
  const double rel = log_d * (est.xi_source.xi_hat * q + budget.bound) /
                     std::sqrt(static_cast<double>(k));
  Interval iv = quantile_interval(Method::IO, est, rel);
  iv.q = q;
  iv.budget = budget;
  return iv;
}

Interval honest_ci_quantile(const Sample& sample, int k, double p, double q) {
  return honest_ci_quantile(sample, k, p, q, rule_of_thumb_budget(hill(sample, k).xi_hat, k));
}

Interval snooping_ci_quantile(const Sample& sample, int k_bar, double r_lower, double p,
                              double q, const std::optional<BiasBudget>& fixed_budget) {
  Interval iv = intersect_grid(Method::IS, k_bar, r_lower, q, [&](int k) {
    return fixed_budget ? honest_ci_quantile(sample, k, p, q, *fixed_budget)
                        : honest_ci_quantile(sample, k, p, q);
  });
  iv.budget = fixed_budget;
  return iv;
}

}  // namespace tailci
