#include "tailci/error.hpp"

namespace tailci {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::empty_sample: return "empty_sample";
    case ErrorKind::config: return "config";
    case ErrorKind::missing_entry: return "missing_entry";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::bounds: return "bounds";
    case ErrorKind::domain: return "domain";
    case ErrorKind::extrapolation: return "extrapolation";
    case ErrorKind::degenerate: return "degenerate";
  }
  return "unknown";
}

}  // namespace tailci
