#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tailci {

/// Validated observations with cached descending order statistics.
///
/// Construction requires at least two finite values. Positivity is not
/// required here: estimators check the order statistics they actually touch,
/// so reflected left-tail data may carry nonpositive values far from the tail.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  /// Descending order statistics: sorted_desc()[j] is Y_{n:n-j}.
  std::span<const double> sorted_desc() const noexcept { return sorted_desc_; }

  /// log of sorted_desc(); NaN where the order statistic is nonpositive.
  std::span<const double> log_desc() const noexcept { return log_desc_; }

  /// Number of leading (largest) order statistics that are strictly positive.
  std::size_t positive_count() const noexcept { return positive_count_; }

  Sample scaled(double factor) const;

 private:
  std::vector<double> values_;
  std::vector<double> sorted_desc_;
  std::vector<double> log_desc_;
  std::size_t positive_count_ = 0;
};

}  // namespace tailci
