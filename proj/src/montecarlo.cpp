#include "tailci/montecarlo.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include "tailci/error.hpp"
#include "tailci/intervals.hpp"
#include "tailci/parallel.hpp"

namespace tailci {
namespace {

struct Outcome {
  bool failed = false;
  bool covered = false;
  bool empty = false;
  double length = 0.0;
};

struct Replication {
  std::vector<Outcome> outcomes;  // one per method
  bool fallback = false;
};

Interval construct(Method m, const Sample& sample, int k_bar, const StudyConfig& cfg,
                   double q_honest, double q_snoop) {
  switch (m) {
    case Method::HN: return naive_ci_index(sample, k_bar, cfg.z);
    case Method::HO: return honest_ci_index(sample, k_bar, q_honest);
    case Method::HS: return snooping_ci_index(sample, k_bar, cfg.r_lower, q_snoop);
    case Method::IN: return naive_ci_quantile(sample, k_bar, cfg.p, cfg.z);
    case Method::IO: return honest_ci_quantile(sample, k_bar, cfg.p, q_honest);
    case Method::IS: return snooping_ci_quantile(sample, k_bar, cfg.r_lower, cfg.p, q_snoop);
  }
  throw Error(ErrorKind::config, "unknown method");
}

}  // namespace

DgpConfig make_dgp(double xi0, double c0) {
  if (!(xi0 > 0.0)) throw Error(ErrorKind::config, "xi0 must be positive");
  if (!(c0 >= 0.0)) throw Error(ErrorKind::config, "c0 must be nonnegative");
  return {xi0, c0, 2.0 * xi0, c0 * xi0 / (1.0 + 2.0 * xi0)};
}

double dgp_inverse(double t, const DgpConfig& cfg) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::domain, "t must lie in (0, 1]");
  }
  return std::pow(t, -cfg.xi0) * std::exp(cfg.c * (1.0 - std::pow(t, cfg.rho)) / cfg.rho);
}

double true_quantile(double p, const DgpConfig& cfg) { return dgp_inverse(p, cfg); }

Sample draw_sample(int n, const DgpConfig& cfg, Rng& rng) {
  if (n < 2) throw Error(ErrorKind::config, "sample size must be at least 2");
  std::vector<double> y(static_cast<std::size_t>(n));
  for (double& v : y) v = dgp_inverse(rng.uniform(), cfg);
  return Sample(std::move(y));
}

StudyResult run_study(const StudyConfig& cfg, const CriticalValueTable& table) {
  if (cfg.n_reps < 1) throw Error(ErrorKind::config, "n_reps must be positive");
  if (cfg.methods.empty()) throw Error(ErrorKind::config, "no methods requested");
  if (cfg.grid.empty()) throw Error(ErrorKind::config, "empty study grid");
  if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw Error(ErrorKind::config, "p must lie in (0, 1)");

  StudyResult result;
  result.master_seed = cfg.master_seed;
  result.q_honest = lookup(table, 1.0, cfg.beta).q;
  result.q_snooping = lookup(table, cfg.r_lower, cfg.beta).q;

  const std::size_t n_methods = cfg.methods.size();
  for (std::size_t cell = 0; cell < cfg.grid.size(); ++cell) {
    const StudyCell& sc = cfg.grid[cell];
    const double xi_truth = sc.dgp.xi0;
    const double q_truth = true_quantile(cfg.p, sc.dgp);

    std::vector<Replication> reps(static_cast<std::size_t>(cfg.n_reps));
    parallel_for(
        reps.size(),
        [&](std::size_t rep) {
          Rng rng(derive_seed(cfg.master_seed, {cell, rep}));
          const Sample sample = draw_sample(sc.n, sc.dgp, rng);
          Replication& out = reps[rep];
          out.outcomes.resize(n_methods);
          std::optional<Selection> sel;
          try {
            sel = select_k(sample, cfg.selection);
          } catch (const Error&) {
            for (auto& o : out.outcomes) o.failed = true;
            return;
          }
          out.fallback = sel->fallback;
          for (std::size_t mi = 0; mi < n_methods; ++mi) {
            const Method m = cfg.methods[mi];
            Outcome& o = out.outcomes[mi];
            try {
              const Interval iv =
                  construct(m, sample, sel->k, cfg, result.q_honest, result.q_snooping);
              o.empty = iv.empty;
              o.length = iv.length();
              o.covered = iv.contains(targets_quantile(m) ? q_truth : xi_truth);
            } catch (const Error&) {
              o.failed = true;
            }
          }
        },
        cfg.threads);

    int fallbacks = 0;
    for (const auto& r : reps) fallbacks += r.fallback ? 1 : 0;
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      StudyRow row;
      row.dgp = sc.dgp;
      row.n = sc.n;
      row.method = cfg.methods[mi];
      row.n_reps = cfg.n_reps;
      row.seed = cfg.master_seed;
      row.fallbacks = fallbacks;
      long covered = 0;
      double length_sum = 0.0;
      for (const auto& r : reps) {
        const Outcome& o = r.outcomes[mi];
        if (o.failed) {
          ++row.failures;
          continue;
        }
        covered += o.covered ? 1 : 0;
        row.empty += o.empty ? 1 : 0;
        length_sum += o.length;
      }
      const int used = row.n_reps - row.failures;
      row.coverage = used > 0 ? static_cast<double>(covered) / used : std::nan("");
      row.avg_length = used > 0 ? length_sum / used : std::nan("");
      result.rows.push_back(row);
    }
  }
  return result;
}

void write_study_csv(std::ostream& out, const StudyResult& result) {
  out << "xi0,c0,n,method,coverage,avg_length,n_reps,failures,seed\n";
  char buf[256];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%g,%g,%d,%s,%.4f,%.6g,%d,%d,", r.dgp.xi0, r.dgp.c0, r.n,
                  to_string(r.method), r.coverage, r.avg_length, r.n_reps, r.failures);
    out << buf << r.seed << '\n';
  }
}

}  // namespace tailci
