#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tailci/rng.hpp"

namespace tailci {

/// Discretized standard Wiener process on t_i = i/m, i = 1..m.
struct WienerPath {
  std::vector<double> values;  // values[i-1] = W(i/m)
  std::uint64_t seed = 0;

  int steps() const noexcept { return static_cast<int>(values.size()); }
};

WienerPath simulate_wiener(int m, Rng& rng);

/// G(r) = r^{-1} * int_0^r (W(s)/s - W(r)/r) ds as a left-truncated Riemann
/// sum over grid points t_1..r. `r` must lie within one step of a grid point.
double gaussian_g(const WienerPath& path, double r);

/// sup over grid points r in [r_lower, 1] of sqrt(r) * G(r).
double sup_statistic(const WienerPath& path, double r_lower);

/// sup_statistic for several lower bounds at once (one O(m) pass).
std::vector<double> sup_profile(const WienerPath& path, const std::vector<double>& r_lowers);

/// Lower end of the sup range, kept as written ("1/100", "10/11", "0.25").
struct RLower {
  std::string label;
  double value = 0.0;
};

RLower parse_r_lower(const std::string& text);

/// The twelve rows of the standard table, 1 down to 1/100.
std::vector<RLower> standard_r_lowers();
std::vector<double> standard_betas();

struct CriticalValueEntry {
  RLower r_lower;
  double beta = 0.0;
  double q = 0.0;
};

struct CriticalValueTable {
  std::vector<CriticalValueEntry> entries;
  int n_sims = 0;
  int n_steps = 0;
  std::uint64_t seed = 0;
};

/// Draws of the sup statistic: result[d][i] for draw d and r_lowers[i].
/// Draw d uses the stream derive_seed(seed, {d}).
std::vector<std::vector<double>> simulate_sups(const std::vector<RLower>& r_lowers,
                                               int n_sims, int m, std::uint64_t seed,
                                               unsigned threads = 0);

/// Empirical (1 - beta/2) quantile: the ceil((1 - beta/2) * N)-th smallest.
double upper_quantile(std::vector<double> draws, double beta);

inline constexpr int kMinTableSims = 1000;

CriticalValueTable build_table(const std::vector<RLower>& r_lowers,
                               const std::vector<double>& betas, int n_sims, int m,
                               std::uint64_t seed, unsigned threads = 0);

/// Quantiles from precomputed draws (as returned by simulate_sups).
CriticalValueTable tabulate(const std::vector<RLower>& r_lowers,
                            const std::vector<double>& betas,
                            const std::vector<std::vector<double>>& sups, int m,
                            std::uint64_t seed);

struct LookupResult {
  double q = 0.0;
  bool interpolated = false;
};

/// Exact entry, or linear interpolation in r_lower at a tabulated beta.
LookupResult lookup(const CriticalValueTable& table, double r_lower, double beta);

void write_table(std::ostream& out, const CriticalValueTable& table);
CriticalValueTable read_table(std::istream& in);
void save_table(const std::string& path, const CriticalValueTable& table);
CriticalValueTable load_table(const std::string& path);

}  // namespace tailci
