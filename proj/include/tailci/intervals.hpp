#pragma once

#include <optional>

#include "tailci/interval.hpp"
#include "tailci/sample.hpp"

namespace tailci {

inline constexpr double kNaiveZ = 1.96;

/// Worst case of |B(r;h)| at a single r when |h(v) - h(0)| <= A v^rho:
/// A r^rho / (1 + rho).
double worst_case_bias(double A, double rho, double r);

/// sup_{r in (0,1]} sqrt(r) * worst_case_bias(A, rho, r) = A / (1 + rho).
double bias_bound(double A, double rho);

BiasBudget make_budget(double A, double rho);

/// rho = 2 xi_hat, A = 0.1 xi_hat (1 + 2 xi_hat) sqrt(k), so bound / sqrt(k)
/// equals 0.1 xi_hat.
BiasBudget rule_of_thumb_budget(double xi_hat, int k);

/// [xi_hat -+ z xi_hat / sqrt(k)].
Interval naive_ci_index(const Sample& sample, int k, double z = kNaiveZ);

/// [xi_hat -+ (xi_hat q + bound) / sqrt(k)].
Interval honest_ci_index(const Sample& sample, int k, double q, const BiasBudget& budget);

/// Same, with the rule-of-thumb budget evaluated at xi_hat(n, k).
Interval honest_ci_index(const Sample& sample, int k, double q);

/// Intersection of honest intervals over every integer k in
/// [ceil(r_lower * k_bar), k_bar]. Without `fixed_budget` each threshold uses
/// its own rule-of-thumb budget. A disjoint family yields `empty == true`.
Interval snooping_ci_index(const Sample& sample, int k_bar, double r_lower, double q,
                           const std::optional<BiasBudget>& fixed_budget = std::nullopt);

/// Q_hat * (1 -+ log(k/(n p)) z xi_hat / sqrt(k)); lower end clamped at 0.
Interval naive_ci_quantile(const Sample& sample, int k, double p, double z = kNaiveZ);

/// Q_hat * (1 -+ log(k/(n p)) (xi_hat q + bound) / sqrt(k)); lower end
/// clamped at 0.
Interval honest_ci_quantile(const Sample& sample, int k, double p, double q,
                            const BiasBudget& budget);
Interval honest_ci_quantile(const Sample& sample, int k, double p, double q);

Interval snooping_ci_quantile(const Sample& sample, int k_bar, double r_lower, double p,
                              double q,
                              const std::optional<BiasBudget>& fixed_budget = std::nullopt);

/// Integer thresholds in [ceil(r_lower * k_bar), k_bar].
std::pair<int, int> snooping_grid(int k_bar, double r_lower);

}  // namespace tailci
