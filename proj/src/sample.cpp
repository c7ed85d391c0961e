#include "tailci/sample.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "tailci/error.hpp"

namespace tailci {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw Error(ErrorKind::empty_sample,
                "sample needs at least 2 observations, got " +
                    std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorKind::input,
                  "non-finite observation at position " + std::to_string(i));
    }
  }
  sorted_desc_ = values_;
  std::sort(sorted_desc_.begin(), sorted_desc_.end(), std::greater<>());

  log_desc_.resize(sorted_desc_.size());
  for (std::size_t j = 0; j < sorted_desc_.size(); ++j) {
    const double y = sorted_desc_[j];
    if (y > 0.0) {
      log_desc_[j] = std::log(y);
      positive_count_ = j + 1;
    } else {
      log_desc_[j] = std::numeric_limits<double>::quiet_NaN();
    }
  }
}

Sample Sample::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return Sample(std::move(v));
}

}  // namespace tailci
