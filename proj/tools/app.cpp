#include "app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include "tailci/critical_values.hpp"
#include "tailci/estimators.hpp"
#include "tailci/intervals.hpp"
#include "tailci/montecarlo.hpp"

#ifndef TAILCI_DEFAULT_CV_TABLE
#define TAILCI_DEFAULT_CV_TABLE "data/critical_values.txt"
#endif

namespace tailci::app {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

struct LoadedSample {
  Sample sample;
  std::size_t n_raw = 0;
  std::size_t dropped = 0;
};

LoadedSample load_sample(const RunConfig& cfg) {
  if (cfg.input.empty()) throw Error(ErrorKind::config, "--input is required");
  if (!(cfg.scale > 0.0)) throw Error(ErrorKind::config, "--scale must be positive");
  std::vector<double> values = read_column(cfg.input, cfg.column);
  for (double& v : values) v *= cfg.scale;
  const std::size_t n_raw = values.size();
  if (cfg.cutoff) {
    auto lt = left_tail_transform(values, *cfg.cutoff);
    return {std::move(lt.sample), n_raw, lt.dropped};
  }
  return {Sample(std::move(values)), n_raw, 0};
}

struct Threshold {
  int k = 0;
  std::optional<Selection> selection;
};

Threshold resolve_threshold(const RunConfig& cfg, const Sample& sample) {
  if (cfg.k) return {*cfg.k, std::nullopt};
  Selection sel = select_k(sample, cfg.selection);
  return {sel.k, std::move(sel)};
}

json selection_json(const Threshold& t) {
  if (!t.selection) return json{{"k_source", "user"}};
  return json{{"k_source", "select_k"},
              {"fallback", t.selection->fallback},
              {"k_lower", t.selection->k_lower},
              {"k_upper", t.selection->k_upper}};
}

json data_json(const RunConfig& cfg, const LoadedSample& data) {
  json j{{"input", cfg.input}, {"n", data.sample.size()}, {"seed", cfg.seed}};
  if (cfg.scale != 1.0) j["scale"] = cfg.scale;
  if (cfg.cutoff) {
    j["cutoff"] = *cfg.cutoff;
    j["n_raw"] = data.n_raw;
    j["dropped"] = data.dropped;
  }
  return j;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

double naive_z(const RunConfig& cfg) {
  if (cfg.z) return *cfg.z;
  if (std::abs(cfg.beta - 0.05) < 1e-12) return kNaiveZ;
  return boost::math::quantile(boost::math::normal(), 1.0 - cfg.beta / 2.0);
}

std::optional<BiasBudget> user_budget(const RunConfig& cfg) {
  if (cfg.A.has_value() != cfg.rho.has_value()) {
    throw Error(ErrorKind::config, "--A and --rho must be given together");
  }
  if (cfg.A && cfg.rule_of_thumb) {
    throw Error(ErrorKind::config, "--rule-of-thumb conflicts with --A/--rho");
  }
  if (cfg.A) return make_budget(*cfg.A, *cfg.rho);
  return std::nullopt;
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::config, "--beta must lie in (0, 1)");
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input:
    case ErrorKind::empty_sample:
      return 2;
    case ErrorKind::config:
    case ErrorKind::missing_entry:
    case ErrorKind::resolution:
      return 3;
    case ErrorKind::bounds:
    case ErrorKind::domain:
    case ErrorKind::extrapolation:
    case ErrorKind::degenerate:
      return 4;
  }
  return 1;
}

std::vector<double> read_column(const std::string& path, const std::string& column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot open input file '" + path + "'");

  std::vector<double> values;
  std::string line;
  int row = 0;
  std::optional<std::size_t> col_index;
  if (column.empty()) col_index = 0;
  bool header_pending = !column.empty();
  std::size_t width = 0;

  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (header_pending) {
      const auto it = std::find(cells.begin(), cells.end(), column);
      if (it == cells.end()) {
        throw Error(ErrorKind::input,
                    "column '" + column + "' not found in header of '" + path + "'");
      }
      col_index = static_cast<std::size_t>(it - cells.begin());
      width = cells.size();
      header_pending = false;
      continue;
    }
    if (column.empty() && cells.size() != 1) {
      throw Error(ErrorKind::input, "row " + std::to_string(row) + ": expected a single column (" +
                                        std::to_string(cells.size()) +
                                        " found); select one with --column");
    }
    if (!column.empty() && cells.size() != width) {
      throw Error(ErrorKind::input, "row " + std::to_string(row) + ": expected " +
                                        std::to_string(width) + " fields, found " +
                                        std::to_string(cells.size()));
    }
    const std::string& cell = cells[*col_index];
    double v = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw Error(ErrorKind::input, "row " + std::to_string(row) + ": non-numeric value '" +
                                        cell + "'");
    }
    values.push_back(v);
  }
  if (header_pending) throw Error(ErrorKind::input, "'" + path + "' has no header row");
  if (values.empty()) throw Error(ErrorKind::empty_sample, "'" + path + "' contains no values");
  return values;
}

std::string resolve_cv_table(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kCvTableEnv); env && *env) return env;
  return TAILCI_DEFAULT_CV_TABLE;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const LoadedSample data = load_sample(cfg);
  const Sample& sample = data.sample;
  const Threshold t = resolve_threshold(cfg, sample);
  const TailIndexEstimate est = hill(sample, t.k);
  std::optional<QuantileEstimate> qe;
  if (cfg.p) qe = weissman_quantile(sample, t.k, *cfg.p);

  std::vector<TailIndexEstimate> path;
  if (cfg.path) path = hill_path(sample, 1, max_valid_threshold(sample));

  if (cfg.format == Format::csv) {
    if (cfg.path) {
      out << "k,xi_hat\n";
      for (const auto& e : path) out << e.k << ',' << fmt(e.xi_hat) << '\n';
    } else {
      out << "n,k,xi_hat,p,q_hat,seed\n";
      out << sample.size() << ',' << t.k << ',' << fmt(est.xi_hat) << ','
          << (qe ? fmt(qe->p) : "") << ',' << (qe ? fmt(qe->q_hat) : "") << ',' << cfg.seed
          << '\n';
    }
    return 0;
  }

  json j = data_json(cfg, data);
  j["command"] = "estimate";
  j["k"] = t.k;
  j["xi_hat"] = est.xi_hat;
  j["selection"] = selection_json(t);
  if (qe) {
    j["quantile"] = {{"p", qe->p}, {"q_hat", qe->q_hat}};
    if (cfg.cutoff) j["quantile"]["restored_q_hat"] = *cfg.cutoff - qe->q_hat;
  }
  if (cfg.path) {
    json arr = json::array();
    for (const auto& e : path) arr.push_back({{"k", e.k}, {"xi_hat", e.xi_hat}});
    j["hill_path"] = std::move(arr);
  }
  write_json(out, j);
  return 0;
}

int cmd_select_k(const RunConfig& cfg, std::ostream& out) {
  const LoadedSample data = load_sample(cfg);
  const Selection sel = select_k(data.sample, cfg.selection);

  if (cfg.format == Format::csv) {
    out << "k,c_criterion,selected,fallback\n";
    for (std::size_t i = 0; i < sel.c_trace.size(); ++i) {
      const int k = sel.k_lower + static_cast<int>(i);
      out << k << ',' << fmt(sel.c_trace[i]) << ',' << (k == sel.k ? 1 : 0) << ','
          << (sel.fallback ? 1 : 0) << '\n';
    }
    return 0;
  }
  json j = data_json(cfg, data);
  j["command"] = "select-k";
  j["k"] = sel.k;
  j["fallback"] = sel.fallback;
  j["k_lower"] = sel.k_lower;
  j["k_upper"] = sel.k_upper;
  j["c_crit"] = cfg.selection.c_crit;
  j["k_min_frac"] = cfg.selection.k_min_frac;
  j["k_max_frac"] = cfg.selection.k_max_frac;
  json trace = json::array();
  for (std::size_t i = 0; i < sel.c_trace.size(); ++i) {
    trace.push_back({{"k", sel.k_lower + static_cast<int>(i)}, {"c", sel.c_trace[i]}});
  }
  j["c_trace"] = std::move(trace);
  write_json(out, j);
  return 0;
}

namespace {

struct IntervalRecord {
  Interval interval;
  std::vector<std::string> flags;
};

int run_intervals(const RunConfig& cfg, std::ostream& out, bool quantile) {
  check_beta(cfg.beta);
  std::vector<Method> methods;
  if (cfg.methods.empty()) {
    methods = quantile ? std::vector{Method::IN, Method::IO, Method::IS}
                       : std::vector{Method::HN, Method::HO, Method::HS};
  } else {
    for (const auto& tag : cfg.methods) {
      const Method m = parse_method(tag);
      if (targets_quantile(m) != quantile) {
        throw Error(ErrorKind::config, std::string("method ") + tag + " belongs to the `" +
                                           (quantile ? "ci" : "quantile-ci") + "` command");
      }
      methods.push_back(m);
    }
  }
  const double p = cfg.p.value_or(0.01);
  const double r_lower = cfg.r_lower.value_or(0.5);
  const std::optional<BiasBudget> budget = user_budget(cfg);

  const bool needs_table = std::any_of(methods.begin(), methods.end(),
                                       [](Method m) { return m != Method::HN && m != Method::IN; });
  const std::string table_path = resolve_cv_table(cfg.cv_table);
  std::optional<CriticalValueTable> table;
  if (needs_table) table = load_table(table_path);

  const LoadedSample data = load_sample(cfg);
  const Sample& sample = data.sample;
  const Threshold t = resolve_threshold(cfg, sample);
  const double z = naive_z(cfg);

  std::vector<IntervalRecord> records;
  for (Method m : methods) {
    IntervalRecord rec;
    LookupResult cv{z, false};
    if (m == Method::HO || m == Method::IO) cv = lookup(*table, 1.0, cfg.beta);
    if (m == Method::HS || m == Method::IS) cv = lookup(*table, r_lower, cfg.beta);
    switch (m) {
      case Method::HN: rec.interval = naive_ci_index(sample, t.k, z); break;
      case Method::HO:
        rec.interval = budget ? honest_ci_index(sample, t.k, cv.q, *budget)
                              : honest_ci_index(sample, t.k, cv.q);
        break;
      case Method::HS: rec.interval = snooping_ci_index(sample, t.k, r_lower, cv.q, budget); break;
      case Method::IN: rec.interval = naive_ci_quantile(sample, t.k, p, z); break;
      case Method::IO:
        rec.interval = budget ? honest_ci_quantile(sample, t.k, p, cv.q, *budget)
                              : honest_ci_quantile(sample, t.k, p, cv.q);
        break;
      case Method::IS:
        rec.interval = snooping_ci_quantile(sample, t.k, r_lower, p, cv.q, budget);
        break;
    }
    if (cv.interpolated) rec.flags.push_back("interpolated_q");
    if (t.selection && t.selection->fallback) rec.flags.push_back("select_k_fallback");
    if (is_snooping(m) && !budget) rec.flags.push_back("per_k_rule_of_thumb");
    if (rec.interval.lower_clamped) rec.flags.push_back("lower_clamped_at_0");
    if (rec.interval.empty) rec.flags.push_back("empty");
    if (cfg.cutoff && quantile) {
      rec.interval = restore_left_tail_interval(rec.interval, *cfg.cutoff, cfg.clamp_at);
      rec.flags.push_back("left_tail_restored");
      if (rec.interval.lower_clamped) rec.flags.push_back("restored_lower_clamped");
    }
    records.push_back(std::move(rec));
  }

  if (cfg.format == Format::csv) {
    out << "method,target,p,k_lo,k_hi,lo,hi,center,xi_hat,q,A,rho,bound,seed,flags\n";
    for (const auto& r : records) {
      const Interval& iv = r.interval;
      std::string flags;
      for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
      out << to_string(iv.method) << ',' << (quantile ? "quantile" : "tail_index") << ','
          << (quantile ? fmt(p) : "") << ',' << iv.k_lo << ',' << iv.k_hi << ',' << fmt(iv.lo)
          << ',' << fmt(iv.hi) << ',' << fmt(iv.center) << ',' << fmt(iv.xi_hat) << ','
          << fmt(iv.q) << ',' << (iv.budget ? fmt(iv.budget->A) : "") << ','
          << (iv.budget ? fmt(iv.budget->rho) : "") << ','
          << (iv.budget ? fmt(iv.budget->bound) : "") << ',' << cfg.seed << ',' << flags
          << '\n';
    }
    return 0;
  }

  json j = data_json(cfg, data);
  j["command"] = quantile ? "quantile-ci" : "ci";
  j["beta"] = cfg.beta;
  j["r_lower"] = r_lower;
  j["k_bar"] = t.k;
  j["selection"] = selection_json(t);
  if (needs_table) j["cv_table"] = table_path;
  if (quantile) j["p"] = p;
  json arr = json::array();
  for (const auto& r : records) {
    const Interval& iv = r.interval;
    json rec{{"method", to_string(iv.method)},
             {"target", quantile ? "quantile" : "tail_index"},
             {"k", iv.k_hi},
             {"k_range", {iv.k_lo, iv.k_hi}},
             {"lo", iv.empty ? json(nullptr) : json(iv.lo)},
             {"hi", iv.empty ? json(nullptr) : json(iv.hi)},
             {"center", iv.center},
             {"xi_hat", iv.xi_hat},
             {"q", iv.q},
             {"A", iv.budget ? json(iv.budget->A) : json(nullptr)},
             {"rho", iv.budget ? json(iv.budget->rho) : json(nullptr)},
             {"bound", iv.budget ? json(iv.budget->bound) : json(nullptr)},
             {"budget_source", iv.budget ? (iv.budget->source == BudgetSource::user
                                                ? "user"
                                                : "rule_of_thumb")
                                         : (is_snooping(iv.method) ? "rule_of_thumb_per_k"
                                                                   : "none")},
             {"flags", r.flags}};
    if (quantile) rec["p"] = p;
    arr.push_back(std::move(rec));
  }
  j["intervals"] = std::move(arr);
  write_json(out, j);
  return 0;
}

}  // namespace

int cmd_ci(const RunConfig& cfg, std::ostream& out) { return run_intervals(cfg, out, false); }

int cmd_quantile_ci(const RunConfig& cfg, std::ostream& out) {
  return run_intervals(cfg, out, true);
}

int cmd_cv_table(const RunConfig& cfg, std::ostream& out) {
  std::vector<RLower> rows;
  if (cfg.r_lowers.empty()) {
    rows = standard_r_lowers();
  } else {
    for (const auto& s : cfg.r_lowers) rows.push_back(parse_r_lower(s));
  }
  const std::vector<double> betas = cfg.betas.empty() ? standard_betas() : cfg.betas;
  // Validates n_sims, steps and grids before any simulation work.
  if (cfg.n_sims < kMinTableSims) {
    throw Error(ErrorKind::config, "--n-sims " + std::to_string(cfg.n_sims) +
                                       " is below the floor of " +
                                       std::to_string(kMinTableSims));
  }
  for (double b : betas) check_beta(b);
  if (cfg.steps < 2) throw Error(ErrorKind::config, "--steps must be at least 2");

  const auto sups = simulate_sups(rows, cfg.n_sims, cfg.steps, cfg.seed, cfg.threads);
  const CriticalValueTable table = tabulate(rows, betas, sups, cfg.steps, cfg.seed);
  write_table(out, table);

  if (!cfg.sup_trace.empty()) {
    std::ofstream trace(cfg.sup_trace, std::ios::binary);
    if (!trace) throw Error(ErrorKind::input, "cannot write '" + cfg.sup_trace + "'");
    trace << "r_lower,bin_lo,bin_hi,count\n";
    const int bins = std::max(1, cfg.histogram_bins);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& d : sups) {
        lo = std::min(lo, d[i]);
        hi = std::max(hi, d[i]);
      }
      const double width = (hi - lo) / bins;
      std::vector<long> counts(static_cast<std::size_t>(bins), 0);
      for (const auto& d : sups) {
        int b = width > 0.0 ? static_cast<int>((d[i] - lo) / width) : 0;
        counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
      }
      for (int b = 0; b < bins; ++b) {
        trace << rows[i].label << ',' << fmt(lo + b * width) << ',' << fmt(lo + (b + 1) * width)
              << ',' << counts[static_cast<std::size_t>(b)] << '\n';
      }
    }
  }
  return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  check_beta(cfg.beta);
  StudyConfig study;
  for (double xi0 : cfg.xi0s) {
    for (double c0 : cfg.c0s) {
      for (int n : cfg.ns) study.grid.push_back({make_dgp(xi0, c0), n});
    }
  }
  if (cfg.methods.empty()) {
    study.methods = {Method::HN, Method::HO, Method::HS, Method::IN, Method::IO, Method::IS};
  } else {
    for (const auto& tag : cfg.methods) study.methods.push_back(parse_method(tag));
  }
  study.n_reps = cfg.reps;
  study.p = cfg.p.value_or(0.01);
  study.master_seed = cfg.seed;
  study.beta = cfg.beta;
  study.r_lower = cfg.r_lower.value_or(0.5);
  study.z = naive_z(cfg);
  study.selection = cfg.selection;
  study.threads = cfg.threads;

  const CriticalValueTable table = load_table(resolve_cv_table(cfg.cv_table));
  const StudyResult result = run_study(study, table);

  if (cfg.format == Format::csv) {
    write_study_csv(out, result);
    return 0;
  }
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"xi0", r.dgp.xi0},
                    {"c0", r.dgp.c0},
                    {"n", r.n},
                    {"method", to_string(r.method)},
                    {"coverage", r.coverage},
                    {"avg_length", r.avg_length},
                    {"n_reps", r.n_reps},
                    {"failures", r.failures},
                    {"fallbacks", r.fallbacks},
                    {"empty", r.empty}});
  }
  write_json(out, json{{"command", "simulate"},
                       {"seed", result.master_seed},
                       {"p", study.p},
                       {"beta", study.beta},
                       {"r_lower", study.r_lower},
                       {"q_honest", result.q_honest},
                       {"q_snooping", result.q_snooping},
                       {"rows", std::move(rows)}});
  return 0;
}

}  // namespace tailci::app
