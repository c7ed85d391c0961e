#include "tailci/interval.hpp"

#include "tailci/error.hpp"

namespace tailci {

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::HN: return "HN";
    case Method::HO: return "HO";
    case Method::HS: return "HS";
    case Method::IN: return "IN";
    case Method::IO: return "IO";
    case Method::IS: return "IS";
  }
  return "?";
}

Method parse_method(const std::string& tag) {
  for (Method m : {Method::HN, Method::HO, Method::HS, Method::IN, Method::IO, Method::IS}) {
    if (tag == to_string(m)) return m;
  }
  throw Error(ErrorKind::config, "unknown method '" + tag + "' (expected HN, HO, HS, IN, IO or IS)");
}

bool targets_quantile(Method m) noexcept {
  return m == Method::IN || m == Method::IO || m == Method::IS;
}

bool is_snooping(Method m) noexcept { return m == Method::HS || m == Method::IS; }

}  // namespace tailci
