#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tailci/error.hpp"
#include "tailci/threshold.hpp"

namespace tailci::app {

enum class Format { json, csv };

inline constexpr std::uint64_t kDefaultSeed = 20240607;
inline constexpr const char* kCvTableEnv = "TAILCI_CV_TABLE";

/// Exit codes: 0 success, 2 input errors, 3 configuration errors,
/// 4 numerical/domain errors.
int exit_code(ErrorKind kind) noexcept;

struct RunConfig {
  // data
  std::string input;
  std::string column;          // header name; empty means single headerless column
  double scale = 1.0;
  std::optional<double> cutoff;  // left-tail mode
  double clamp_at = 0.0;

  std::string output;          // empty means stdout
  Format format = Format::json;
  std::uint64_t seed = kDefaultSeed;

  // estimation / intervals
  std::optional<int> k;
  bool path = false;
  std::optional<double> p;
  double beta = 0.05;
  std::optional<double> r_lower;
  std::optional<double> A;
  std::optional<double> rho;
  bool rule_of_thumb = false;
  std::optional<double> z;
  std::vector<std::string> methods;
  std::string cv_table;
  SelectionConfig selection;

  // cv-table
  int n_sims = 20000;
  int steps = 50000;
  std::vector<std::string> r_lowers;
  std::vector<double> betas;
  std::string sup_trace;
  int histogram_bins = 50;

  // simulate
  std::vector<double> xi0s{1.0, 0.5};
  std::vector<double> c0s{0.0, 0.5, 1.0};
  std::vector<int> ns{250, 500, 1000};
  int reps = 500;
  unsigned threads = 0;
};

/// Reads one numeric column. Blank lines are skipped; every other row must
/// parse completely as a finite number. With `column` set the first
/// non-blank line is a header.
std::vector<double> read_column(const std::string& path, const std::string& column);

/// --cv-table, then $TAILCI_CV_TABLE, then the table shipped with the sources.
std::string resolve_cv_table(const std::string& flag);

int cmd_estimate(const RunConfig& cfg, std::ostream& out);
int cmd_select_k(const RunConfig& cfg, std::ostream& out);
int cmd_ci(const RunConfig& cfg, std::ostream& out);
int cmd_quantile_ci(const RunConfig& cfg, std::ostream& out);
int cmd_cv_table(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);

}  // namespace tailci::app
