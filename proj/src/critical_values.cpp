#include "tailci/critical_values.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "tailci/error.hpp"
#include "tailci/numeric.hpp"
#include "tailci/parallel.hpp"

namespace tailci {
namespace {

constexpr double kKeyTolerance = 1e-12;

int grid_index(const WienerPath& path, double r) {
  const int m = path.steps();
  if (!(r <= 1.0 + 1.0 / m)) {
    throw Error(ErrorKind::config, "r must not exceed 1");
  }
  const long i = std::lround(r * m);
  if (i < 1) {
    throw Error(ErrorKind::resolution,
                "r = " + std::to_string(r) + " lies below the first grid point 1/" +
                    std::to_string(m));
  }
  return static_cast<int>(std::min<long>(i, m));
}

// sum_{l<=i} (W_l/t_l - W_i/t_i) * (1/m) / t_i, with the running sum of W_l/t_l
// supplied by the caller so every entry point shares the same arithmetic.
inline double g_from_sums(double running, double w_i, int i, int m) {
  const double t_i = static_cast<double>(i) / m;
  return (running - i * (w_i / t_i)) / m / t_i;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::config, "not a number: '" + s + "'");
  }
  return v;
}

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

WienerPath simulate_wiener(int m, Rng& rng) {
  if (m < 2) throw Error(ErrorKind::config, "Wiener path needs at least 2 steps");
  WienerPath path;
  path.seed = rng.seed();
  path.values.resize(static_cast<std::size_t>(m));
  const double sd = std::sqrt(1.0 / m);
  double w = 0.0;
  for (double& v : path.values) {
    w += sd * rng.normal();
    v = w;
  }
  return path;
}

double gaussian_g(const WienerPath& path, double r) {
  const int m = path.steps();
  const int i_r = grid_index(path, r);
  double running = 0.0;
  for (int l = 1; l <= i_r; ++l) {
    running += path.values[static_cast<std::size_t>(l - 1)] / (static_cast<double>(l) / m);
  }
  return g_from_sums(running, path.values[static_cast<std::size_t>(i_r - 1)], i_r, m);
}

std::vector<double> sup_profile(const WienerPath& path, const std::vector<double>& r_lowers) {
  const int m = path.steps();
  std::vector<int> starts;
  starts.reserve(r_lowers.size());
  for (double r : r_lowers) {
    if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorKind::config, "r_lower must lie in (0, 1]");
    const int i_lo = std::max(1, ceil_index(r * m));
    if (i_lo > m) {
      throw Error(ErrorKind::resolution, "no grid point in [r_lower, 1]");
    }
    starts.push_back(i_lo);
  }

  std::vector<double> h(static_cast<std::size_t>(m));
  double running = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double w_i = path.values[static_cast<std::size_t>(i - 1)];
    running += w_i / (static_cast<double>(i) / m);
    const double g = g_from_sums(running, w_i, i, m);
    h[static_cast<std::size_t>(i - 1)] = std::sqrt(static_cast<double>(i) / m) * g;
  }

  // Suffix maxima; suffix[i-1] = max_{l >= i} h_l computed in place.
  for (int i = m - 1; i >= 1; --i) {
    auto& cur = h[static_cast<std::size_t>(i - 1)];
    cur = std::max(cur, h[static_cast<std::size_t>(i)]);
  }
  std::vector<double> sups;
  sups.reserve(starts.size());
  for (int i_lo : starts) sups.push_back(h[static_cast<std::size_t>(i_lo - 1)]);
  return sups;
}

double sup_statistic(const WienerPath& path, double r_lower) {
  return sup_profile(path, {r_lower}).front();
}

RLower parse_r_lower(const std::string& text) {
  RLower r;
  r.label = text;
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    r.value = parse_double(text);
  } else {
    const double num = parse_double(text.substr(0, slash));
    const double den = parse_double(text.substr(slash + 1));
    if (den == 0.0) throw Error(ErrorKind::config, "zero denominator in '" + text + "'");
    r.value = num / den;
  }
  if (!(r.value > 0.0 && r.value <= 1.0)) {
    throw Error(ErrorKind::config, "r_lower '" + text + "' outside (0, 1]");
  }
  return r;
}

std::vector<RLower> standard_r_lowers() {
  std::vector<RLower> rows;
  for (const char* s : {"1", "10/11", "5/6", "2/3", "1/2", "1/3", "1/4", "1/5", "1/10",
                        "1/20", "1/50", "1/100"}) {
    rows.push_back(parse_r_lower(s));
  }
  return rows;
}

std::vector<double> standard_betas() { return {0.10, 0.05, 0.01}; }

std::vector<std::vector<double>> simulate_sups(const std::vector<RLower>& r_lowers,
                                               int n_sims, int m, std::uint64_t seed,
                                               unsigned threads) {
  if (n_sims < 1) throw Error(ErrorKind::config, "n_sims must be positive");
  if (r_lowers.empty()) throw Error(ErrorKind::config, "no r_lower values");
  std::vector<double> values;
  for (const auto& r : r_lowers) values.push_back(r.value);

  std::vector<std::vector<double>> sups(static_cast<std::size_t>(n_sims));
  parallel_for(
      sups.size(),
      [&](std::size_t d) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(d)}));
        sups[d] = sup_profile(simulate_wiener(m, rng), values);
      },
      threads);
  return sups;
}

double upper_quantile(std::vector<double> draws, double beta) {
  if (draws.empty()) throw Error(ErrorKind::config, "no draws");
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::config, "beta must lie in (0, 1)");
  const auto n = static_cast<long long>(draws.size());
  const long long rank = std::clamp<long long>(ceil_index((1.0 - beta / 2.0) * n), 1, n);
  auto nth = draws.begin() + (rank - 1);
  std::nth_element(draws.begin(), nth, draws.end());
  return *nth;
}

CriticalValueTable tabulate(const std::vector<RLower>& r_lowers,
                            const std::vector<double>& betas,
                            const std::vector<std::vector<double>>& sups, int m,
                            std::uint64_t seed) {
  CriticalValueTable table;
  table.n_sims = static_cast<int>(sups.size());
  table.n_steps = m;
  table.seed = seed;
  std::vector<double> column(sups.size());
  for (std::size_t i = 0; i < r_lowers.size(); ++i) {
    for (std::size_t d = 0; d < sups.size(); ++d) column[d] = sups[d][i];
    for (double beta : betas) {
      table.entries.push_back({r_lowers[i], beta, upper_quantile(column, beta)});
    }
  }
  return table;
}

CriticalValueTable build_table(const std::vector<RLower>& r_lowers,
                               const std::vector<double>& betas, int n_sims, int m,
                               std::uint64_t seed, unsigned threads) {
  if (n_sims < kMinTableSims) {
    throw Error(ErrorKind::config, "n_sims = " + std::to_string(n_sims) +
                                       " is below the floor of " +
                                       std::to_string(kMinTableSims));
  }
  if (m < 2) throw Error(ErrorKind::config, "need at least 2 steps");
  if (betas.empty()) throw Error(ErrorKind::config, "no beta values");
  for (double b : betas) {
    if (!(b > 0.0 && b < 1.0)) throw Error(ErrorKind::config, "beta must lie in (0, 1)");
  }
  for (const auto& r : r_lowers) {
    if (ceil_index(r.value * m) > m) {
      throw Error(ErrorKind::resolution, "r_lower " + r.label + " has no grid point");
    }
  }
  return tabulate(r_lowers, betas, simulate_sups(r_lowers, n_sims, m, seed, threads), m, seed);
}

LookupResult lookup(const CriticalValueTable& table, double r_lower, double beta) {
  const CriticalValueEntry* below = nullptr;
  const CriticalValueEntry* above = nullptr;
  bool beta_found = false;
  for (const auto& e : table.entries) {
    if (std::abs(e.beta - beta) > kKeyTolerance) continue;
    beta_found = true;
    if (std::abs(e.r_lower.value - r_lower) <= kKeyTolerance) return {e.q, false};
    if (e.r_lower.value < r_lower && (!below || e.r_lower.value > below->r_lower.value)) {
      below = &e;
    }
    if (e.r_lower.value > r_lower && (!above || e.r_lower.value < above->r_lower.value)) {
      above = &e;
    }
  }
  if (!beta_found) {
    throw Error(ErrorKind::missing_entry,
                "critical-value table has no column for beta = " +
                    format_double("%g", beta) +
                    "; generate one with the `cv-table` command");
  }
  if (!below || !above) {
    throw Error(ErrorKind::missing_entry,
                "r_lower = " + format_double("%g", r_lower) +
                    " lies outside the tabulated range (no extrapolation); generate a "
                    "table with the `cv-table` command");
  }
  const double w = (r_lower - below->r_lower.value) /
                   (above->r_lower.value - below->r_lower.value);
  return {below->q + w * (above->q - below->q), true};
}

void write_table(std::ostream& out, const CriticalValueTable& table) {
  out << "# tailci critical values: (1 - beta/2) quantiles of sup_{r in [r_lower,1]} "
         "sqrt(r) G(r)\n";
  out << "seed " << table.seed << '\n';
  out << "n_sims " << table.n_sims << '\n';
  out << "n_steps " << table.n_steps << '\n';
  out << "r_lower beta q\n";
  for (const auto& e : table.entries) {
    out << e.r_lower.label << ' ' << format_double("%.10g", e.beta) << ' '
        << format_double("%.6f", e.q) << '\n';
  }
}

CriticalValueTable read_table(std::istream& in) {
  CriticalValueTable table;
  bool have_seed = false, have_sims = false, have_steps = false, in_rows = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string a, b, c, extra;
    fields >> a >> b >> c;
    const bool has_extra = static_cast<bool>(fields >> extra);
    auto fail = [&](const std::string& why) {
      throw Error(ErrorKind::input,
                  "critical-value table line " + std::to_string(line_no) + ": " + why);
    };
    if (!in_rows) {
      if (a == "r_lower" && b == "beta" && c == "q" && !has_extra) {
        in_rows = true;
      } else if (c.empty() && !b.empty()) {
        if (a == "seed") {
          table.seed = std::stoull(b);
          have_seed = true;
        } else if (a == "n_sims") {
          table.n_sims = std::stoi(b);
          have_sims = true;
        } else if (a == "n_steps") {
          table.n_steps = std::stoi(b);
          have_steps = true;
        } else {
          fail("unknown header key '" + a + "'");
        }
      } else {
        fail("malformed header");
      }
      continue;
    }
    if (c.empty() || has_extra) fail("expected 'r_lower beta q'");
    try {
      table.entries.push_back({parse_r_lower(a), parse_double(b), parse_double(c)});
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  if (!(have_seed && have_sims && have_steps)) {
    throw Error(ErrorKind::input, "critical-value table lacks seed/n_sims/n_steps provenance");
  }
  if (!in_rows || table.entries.empty()) {
    throw Error(ErrorKind::input, "critical-value table has no rows");
  }
  return table;
}

void save_table(const std::string& path, const CriticalValueTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::input, "cannot write '" + path + "'");
  write_table(out, table);
  if (!out) throw Error(ErrorKind::input, "failed writing '" + path + "'");
}

CriticalValueTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::missing_entry,
                "cannot open critical-value table '" + path +
                    "'; generate one with the `cv-table` command");
  }
  return read_table(in);
}

}  // namespace tailci
