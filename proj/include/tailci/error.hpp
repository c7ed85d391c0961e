#pragma once

#include <stdexcept>
#include <string>

namespace tailci {

/// Failure categories. The CLI maps each category onto a distinct exit code.
enum class ErrorKind {
  input,          // unreadable file, bad rows, empty column
  empty_sample,   // fewer than two usable observations
  config,         // invalid parameters or grids
  missing_entry,  // critical value not available in the table
  resolution,     // requested point not representable on the simulation grid
  bounds,         // index outside the valid range
  domain,         // mathematically invalid argument (log of nonpositive, ...)
  extrapolation,  // quantile level not in the extrapolation direction (n*p >= k)
  degenerate,     // estimate degenerates (e.g. zero tail index in a ratio)
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tailci
