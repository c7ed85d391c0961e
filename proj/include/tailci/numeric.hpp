#pragma once

#include <cmath>

namespace tailci {

// Integer rounding of products such as 0.99 * n or r * k that are meant to be
// exact but may land one ulp off.
inline int ceil_index(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }
inline int floor_index(double x) { return static_cast<int>(std::floor(x + 1e-9)); }

}  // namespace tailci
