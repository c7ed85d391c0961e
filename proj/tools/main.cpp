// tailci: honest confidence intervals for the tail index and extreme quantiles.

#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "app.hpp"

namespace {

using tailci::app::Format;
using tailci::app::RunConfig;

void add_data_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--input", cfg.input, "CSV file with the observations")->required();
  cmd->add_option("--column", cfg.column, "Header name of the column to use");
  cmd->add_option("--scale", cfg.scale, "Multiply every observation by this factor");
  cmd->add_option("--cutoff", cfg.cutoff,
                  "Left-tail mode: analyse cutoff - B for observations B < cutoff");
}

void add_selection_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--c-crit", cfg.selection.c_crit, "Diagnostic critical level")
      ->default_val(1.25);
  cmd->add_option("--k-min-frac", cfg.selection.k_min_frac, "Lower bracket as a fraction of n")
      ->default_val(0.01);
  cmd->add_option("--k-max-frac", cfg.selection.k_max_frac, "Upper bracket as a fraction of n")
      ->default_val(0.99);
}

void add_interval_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--k", cfg.k, "Threshold k (default: data-driven selection)");
  cmd->add_option("--beta", cfg.beta, "1 - confidence level")->default_val(0.05);
  cmd->add_option("--r-lower", cfg.r_lower, "Lower end of the snooping range (default 1/2)");
  cmd->add_option("--A", cfg.A, "Second-order scale A (with --rho)");
  cmd->add_option("--rho", cfg.rho, "Second-order decay rho (with --A)");
  cmd->add_flag("--rule-of-thumb", cfg.rule_of_thumb,
                "Use the rule-of-thumb budget (default when --A/--rho are absent)");
  cmd->add_option("--z", cfg.z, "Critical value for the naive intervals");
  cmd->add_option("--methods", cfg.methods, "Subset of methods, e.g. HN,HO")->delimiter(',');
  cmd->add_option("--cv-table", cfg.cv_table,
                  std::string("Critical-value table (default: $") + tailci::app::kCvTableEnv +
                      " or the shipped table)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Honest confidence intervals for the tail index and extreme quantiles"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string format;
  app.add_option("--seed", cfg.seed, "Master seed for simulation commands")
      ->default_val(tailci::app::kDefaultSeed);
  app.add_option("--output", cfg.output, "Write output to this file instead of stdout");
  app.add_option("--format", format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  std::function<int(const RunConfig&, std::ostream&)> handler;
  bool csv_default = false;

  auto* estimate = app.add_subcommand("estimate", "Hill estimate (and Weissman quantile)");
  add_data_options(estimate, cfg);
  add_selection_options(estimate, cfg);
  estimate->add_option("--k", cfg.k, "Threshold k (default: data-driven selection)");
  estimate->add_option("--p", cfg.p, "Also estimate the 1 - p quantile");
  estimate->add_flag("--path", cfg.path, "Emit the full Hill path");
  estimate->callback([&] { handler = tailci::app::cmd_estimate; });

  auto* select = app.add_subcommand("select-k", "Data-driven threshold with the C_k trace");
  add_data_options(select, cfg);
  add_selection_options(select, cfg);
  select->callback([&] { handler = tailci::app::cmd_select_k; });

  auto* ci = app.add_subcommand("ci", "Confidence intervals for the tail index (HN, HO, HS)");
  add_data_options(ci, cfg);
  add_selection_options(ci, cfg);
  add_interval_options(ci, cfg);
  ci->callback([&] { handler = tailci::app::cmd_ci; });

  auto* qci = app.add_subcommand("quantile-ci",
                                 "Confidence intervals for the 1 - p quantile (IN, IO, IS)");
  add_data_options(qci, cfg);
  add_selection_options(qci, cfg);
  add_interval_options(qci, cfg);
  qci->add_option("--p", cfg.p, "Tail probability (default 0.01)");
  qci->add_option("--clamp-at", cfg.clamp_at,
                  "Left-tail mode: lower clamp for restored intervals")
      ->default_val(0.0);
  qci->callback([&] { handler = tailci::app::cmd_quantile_ci; });

  auto* cv = app.add_subcommand("cv-table", "Simulate the critical-value table");
  cv->add_option("--n-sims", cfg.n_sims, "Simulation draws")->default_val(20000);
  cv->add_option("--steps", cfg.steps, "Wiener grid steps")->default_val(50000);
  cv->add_option("--r-lowers", cfg.r_lowers, "Rows, e.g. 1,1/2,1/100")->delimiter(',');
  cv->add_option("--betas", cfg.betas, "Columns, e.g. 0.1,0.05,0.01")->delimiter(',');
  cv->add_option("--sup-trace", cfg.sup_trace, "Write a histogram of the sup draws (CSV)");
  cv->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  cv->callback([&] { handler = tailci::app::cmd_cv_table; });

  auto* sim = app.add_subcommand("simulate", "Monte Carlo coverage and length study");
  sim->add_option("--xi0", cfg.xi0s, "Tail indices")->delimiter(',');
  sim->add_option("--c0", cfg.c0s, "Deviation scales")->delimiter(',');
  sim->add_option("--n", cfg.ns, "Sample sizes")->delimiter(',');
  sim->add_option("--methods", cfg.methods, "Methods, e.g. HN,HO,IO")->delimiter(',');
  sim->add_option("--reps", cfg.reps, "Replications per cell")->default_val(500);
  sim->add_option("--p", cfg.p, "Tail probability for quantile targets (default 0.01)");
  sim->add_option("--beta", cfg.beta, "1 - confidence level")->default_val(0.05);
  sim->add_option("--r-lower", cfg.r_lower, "Snooping lower bound (default 1/2)");
  sim->add_option("--cv-table", cfg.cv_table, "Critical-value table");
  sim->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  add_selection_options(sim, cfg);
  sim->callback([&] {
    handler = tailci::app::cmd_simulate;
    csv_default = true;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return tailci::app::exit_code(tailci::ErrorKind::config);
  }

  if (format.empty()) {
    cfg.format = csv_default ? Format::csv : Format::json;
  } else {
    cfg.format = format == "csv" ? Format::csv : Format::json;
  }

  try {
    if (cfg.output.empty()) return handler(cfg, std::cout);
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) {
      throw tailci::Error(tailci::ErrorKind::input, "cannot write '" + cfg.output + "'");
    }
    return handler(cfg, out);
  } catch (const tailci::Error& e) {
    std::cerr << "error (" << tailci::to_string(e.kind()) << "): " << e.what() << '\n';
    return tailci::app::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
