#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tailci {

enum class Method { HN, HO, HS, IN, IO, IS };

const char* to_string(Method m) noexcept;
Method parse_method(const std::string& tag);
bool targets_quantile(Method m) noexcept;
bool is_snooping(Method m) noexcept;

struct Target {
  enum class Kind { tail_index, quantile } kind = Kind::tail_index;
  double p = 0.0;  // tail probability, quantile targets only
};

enum class BudgetSource { user, rule_of_thumb };

/// Second-order budget (A, rho) and the worst-case bias bound A / (1 + rho).
struct BiasBudget {
  double A = 0.0;
  double rho = 1.0;
  double bound = 0.0;
  BudgetSource source = BudgetSource::user;
};

/// Closed interval with construction metadata. An empty snooping
/// intersection is represented by `empty == true` with NaN endpoints.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  Method method = Method::HN;
  Target target;
  int k_lo = 0;  // threshold used; for snooping the grid is [k_lo, k_hi]
  int k_hi = 0;
  bool empty = false;
  bool lower_clamped = false;
  double center = 0.0;      // point estimate the interval is built around
  double xi_hat = 0.0;      // tail index at k_hi
  double q = 0.0;           // critical value (z for naive intervals)
  std::optional<BiasBudget> budget;  // unset for per-threshold snooping budgets

  double length() const noexcept { return empty ? 0.0 : hi - lo; }
  bool contains(double x) const noexcept { return !empty && lo <= x && x <= hi; }
  bool subset_of(const Interval& other) const noexcept {
    return empty || (!other.empty && other.lo <= lo && hi <= other.hi);
  }
};

}  // namespace tailci
