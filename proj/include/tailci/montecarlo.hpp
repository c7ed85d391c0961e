#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tailci/critical_values.hpp"
#include "tailci/interval.hpp"
#include "tailci/rng.hpp"
#include "tailci/sample.hpp"
#include "tailci/threshold.hpp"

namespace tailci {

/// Simulation family F^{-1}(1-t) = t^{-xi0} exp(c (1 - t^rho) / rho) with
/// rho = 2 xi0 and c = c0 xi0 / (1 + 2 xi0).
struct DgpConfig {
  double xi0 = 1.0;
  double c0 = 0.0;
  double rho = 2.0;
  double c = 0.0;
};

DgpConfig make_dgp(double xi0, double c0);

double dgp_inverse(double t, const DgpConfig& cfg);

/// True (1 - p) quantile of the family.
double true_quantile(double p, const DgpConfig& cfg);

Sample draw_sample(int n, const DgpConfig& cfg, Rng& rng);

struct StudyCell {
  DgpConfig dgp;
  int n = 0;
};

struct StudyConfig {
  std::vector<StudyCell> grid;
  std::vector<Method> methods;
  int n_reps = 0;
  double p = 0.01;              // quantile targets estimate the 1 - p quantile
  std::uint64_t master_seed = 0;
  double beta = 0.05;
  double r_lower = 0.5;         // snooping range [r_lower * k_bar, k_bar]
  double z = 1.96;              // naive intervals
  SelectionConfig selection;
  unsigned threads = 0;
};

struct StudyRow {
  DgpConfig dgp;
  int n = 0;
  Method method = Method::HN;
  double coverage = 0.0;     // over replications that did not fail
  double avg_length = 0.0;   // empty snooping intersections count as length 0
  int n_reps = 0;
  int failures = 0;          // replications where construction threw
  int fallbacks = 0;         // replications where select_k hit its upper bound
  int empty = 0;             // empty snooping intersections
  std::uint64_t seed = 0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  std::uint64_t master_seed = 0;
  double q_honest = 0.0;
  double q_snooping = 0.0;
};

/// Replication `rep` of cell `cell` draws from derive_seed(master_seed, {cell, rep}).
StudyResult run_study(const StudyConfig& cfg, const CriticalValueTable& table);

/// Header: xi0,c0,n,method,coverage,avg_length,n_reps,failures,seed
void write_study_csv(std::ostream& out, const StudyResult& result);

}  // namespace tailci
