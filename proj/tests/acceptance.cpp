// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tailci/critical_values.hpp"
#include "tailci/estimators.hpp"
#include "tailci/intervals.hpp"
#include "tailci/montecarlo.hpp"
#include "tailci/threshold.hpp"

using namespace tailci;

namespace {

constexpr std::uint64_t kSeed = 20240607;

// Published table, rows r_lower, columns beta = 0.10, 0.05, 0.01.
const std::map<std::string, std::array<double, 3>> kTable1 = {
    {"1", {1.64, 1.96, 2.56}},     {"10/11", {1.87, 2.19, 2.76}}, {"5/6", {1.95, 2.27, 2.86}},
    {"2/3", {2.09, 2.42, 3.01}},   {"1/2", {2.22, 2.54, 3.12}},   {"1/3", {2.33, 2.66, 3.23}},
    {"1/4", {2.41, 2.71, 3.27}},   {"1/5", {2.46, 2.74, 3.34}},   {"1/10", {2.58, 2.85, 3.44}},
    {"1/20", {2.67, 2.92, 3.51}},  {"1/50", {2.75, 3.01, 3.57}},  {"1/100", {2.80, 3.08, 3.61}}};

int column_of(double beta) { return beta > 0.07 ? 0 : (beta > 0.03 ? 1 : 2); }

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Compares a generated table with the published one; returns the number of
// entries outside tolerance.
int compare_table(const CriticalValueTable& t, double tol, double tol_01, bool anchors,
                  const char* tag) {
  int bad = 0;
  for (const auto& e : t.entries) {
    const double ref = kTable1.at(e.r_lower.label)[static_cast<std::size_t>(column_of(e.beta))];
    double limit = e.beta < 0.03 ? tol_01 : tol;
    if (anchors && e.r_lower.label == "1" && column_of(e.beta) == 1) limit = 0.03;
    const double dev = e.q - ref;
    if (std::abs(dev) > limit) {
      ++bad;
      std::printf("  [%s] r_lower=%s beta=%.2f q=%.4f published=%.2f dev=%+.4f tol=%.2f\n", tag,
                  e.r_lower.label.c_str(), e.beta, e.q, ref, dev, limit);
    }
  }
  return bad;
}

template <class T>
bool bits_equal(const T& a, const T& b) {
  return std::ranges::equal(a, b);
}

}  // namespace

int main() {
  const auto rows = standard_r_lowers();
  const auto betas = standard_betas();

  // 1. Critical value table.
  auto t0 = std::chrono::steady_clock::now();
  const auto sups = simulate_sups(rows, 20000, 50000, kSeed);
  const auto full = tabulate(rows, betas, sups, 50000, kSeed);
  const double full_time = seconds_since(t0);
  const int full_bad = compare_table(full, 0.05, 0.08, true, "full");
  std::printf("  full scale (20000 draws, 50000 steps, seed %llu): %d/36 outside tolerance, %.1fs\n",
              static_cast<unsigned long long>(kSeed), full_bad, full_time);

  t0 = std::chrono::steady_clock::now();
  const auto reduced = build_table(rows, betas, 2000, 10000, kSeed);
  const double reduced_time = seconds_since(t0);
  const int reduced_bad = compare_table(reduced, 0.10, 0.10, false, "reduced");
  std::printf("  reduced (2000 draws, 10000 steps): %d/36 outside +-0.10, %.1fs\n", reduced_bad,
              reduced_time);
  report(1, full_bad == 0 && reduced_bad == 0 && reduced_time < 60.0,
         "critical value table matches the published table");

  // 2 and 3. Desk-scale coverage study at n = 500.
  StudyConfig study;
  study.grid = {{make_dgp(1.0, 0.0), 500}, {make_dgp(1.0, 1.0), 500}};
  study.methods = {Method::HN, Method::HO, Method::IN, Method::IO};
  study.n_reps = 500;
  study.master_seed = kSeed;
  study.p = 0.01;
  const auto result = run_study(study, full);
  auto row = [&](double c0, Method m) {
    for (const auto& r : result.rows)
      if (r.dgp.c0 == c0 && r.method == m) return r;
    return StudyRow{};
  };
  for (const auto& r : result.rows) {
    std::printf("  (xi0=%g, c0=%g, n=%d) %s coverage=%.3f avg_length=%.4g failures=%d\n",
                r.dgp.xi0, r.dgp.c0, r.n, to_string(r.method), r.coverage, r.avg_length,
                r.failures);
  }
  {
    const auto hn0 = row(0.0, Method::HN), ho0 = row(0.0, Method::HO);
    const auto hn1 = row(1.0, Method::HN), ho1 = row(1.0, Method::HO);
    const bool ok = std::abs(hn0.coverage - 0.92) <= 0.04 && std::abs(ho0.coverage - 0.99) <= 0.02 &&
                    std::abs(hn1.coverage - 0.64) <= 0.06 && std::abs(ho1.coverage - 0.98) <= 0.02 &&
                    ho0.coverage > hn0.coverage && ho1.coverage > hn1.coverage;
    report(2, ok, "tail index interval coverage (500 replications, n = 500)");
  }
  {
    const auto in = row(0.0, Method::IN), io = row(0.0, Method::IO);
    const bool ok = std::abs(in.coverage - 0.92) <= 0.04 && std::abs(io.coverage - 0.98) <= 0.03 &&
                    std::abs(in.avg_length / 91.0 - 1.0) <= 0.20 &&
                    std::abs(io.avg_length / 183.0 - 1.0) <= 0.20;
    report(3, ok, "quantile interval coverage and length (500 replications, n = 500)");
  }

  // 4. Bias integral against the closed form.
  {
    double worst = 0.0;
    for (auto [A, rho] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.5, 2.0}}) {
      for (double r : {0.25, 0.5, 1.0}) {
        const double numeric = oracle::bias_integral(A, rho, r);
        worst = std::max(worst, std::abs(numeric / worst_case_bias(A, rho, r) - 1.0));
      }
    }
    std::printf("  worst relative error %.3g\n", worst);
    report(4, worst <= 1e-4, "bias integral equals A r^rho / (1 + rho)");
  }

  // 5. Property suite.
  {
    bool ok = true;
    auto check = [&](bool cond, const char* what) {
      if (!cond) {
        std::printf("  property failed: %s\n", what);
        ok = false;
      }
    };

    std::mt19937_64 gen(kSeed);
    std::uniform_real_distribution<double> unif(0.5, 3.0);
    std::uniform_real_distribution<double> log_scale(-6.0, 6.0);
    double worst_scale = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto base = oracle::pareto_from_spacings(1000, unif(gen), gen());
      const double c = std::exp(log_scale(gen));
      std::vector<double> scaled(base);
      for (double& x : scaled) x *= c;
      const Sample a(base), b(scaled);
      for (int k : {10, 100, 500}) {
        const double xa = hill(a, k).xi_hat, xb = hill(b, k).xi_hat;
        worst_scale = std::max(worst_scale, std::abs(xb / xa - 1.0));
      }
    }
    check(worst_scale <= 1e-12, "Hill scale invariance");

    const Sample pareto(oracle::pareto_from_spacings(5000, 1.0, kSeed));
    for (int k : {50, 300}) {
      const auto hn = naive_ci_index(pareto, k, 2.2);
      const auto ho = honest_ci_index(pareto, k, 2.2, make_budget(0.0, 1.0));
      const auto in = naive_ci_quantile(pareto, k, 0.001, 2.2);
      const auto io = honest_ci_quantile(pareto, k, 0.001, 2.2, make_budget(0.0, 1.0));
      check(std::abs(hn.lo - ho.lo) <= 1e-12 && std::abs(hn.hi - ho.hi) <= 1e-12,
            "zero-bias reduction (tail index)");
      check(std::abs(in.lo - io.lo) <= 1e-12 * in.center && std::abs(in.hi - io.hi) <= 1e-12 * in.center,
            "zero-bias reduction (quantile)");
    }

    const auto hs = snooping_ci_index(pareto, 400, 0.5, 2.52);
    const auto is = snooping_ci_quantile(pareto, 400, 0.5, 0.001, 2.52);
    for (int k = 200; k <= 400; ++k) {
      check(hs.subset_of(honest_ci_index(pareto, k, 2.52)), "HS within each honest interval");
      check(is.subset_of(honest_ci_quantile(pareto, k, 0.001, 2.52)),
            "IS within each honest interval");
    }

    for (int k = 1; k <= 500; ++k) {
      const auto w = guillou_weights(k);
      double sum = 0.0;
      bool anti = true;
      for (int j = 0; j < k; ++j) {
        sum += w[static_cast<std::size_t>(j)];
        anti = anti && w[static_cast<std::size_t>(j)] == -w[static_cast<std::size_t>(k - 1 - j)];
      }
      check(sum == 0.0 && anti, "Guillou weights antisymmetric and zero-sum");
    }

    std::vector<double> t;
    for (int rep = 0; rep < 2000; ++rep) {
      const Sample s(oracle::pareto_from_spacings(5000, 1.0, derive_seed(kSeed, {7, static_cast<std::uint64_t>(rep)})));
      t.push_back(t_statistic(s, 200));
    }
    std::printf("  T_200 under exact Pareto: mean %.4f variance %.4f\n", oracle::mean(t),
                oracle::variance(t));
    check(std::abs(oracle::mean(t)) <= 0.07 && std::abs(oracle::variance(t) - 1.0) <= 0.15,
          "T mean and variance");

    std::vector<double> g1;
    for (const auto& d : sups) g1.push_back(d[0]);  // r_lower = 1 row is sqrt(1) G(1)
    std::printf("  Var(G(1)) over 20000 draws: %.4f\n", oracle::variance(g1));
    check(std::abs(oracle::variance(g1) - 1.0) <= 0.03, "Var(sqrt(r) G(r)) at r = 1");

    for (const auto* tab : {&full, &reduced}) {
      for (const auto& e : tab->entries) {
        for (const auto& f : tab->entries) {
          if (e.beta == f.beta && e.r_lower.value < f.r_lower.value) check(e.q >= f.q, "monotone in r_lower");
          if (e.r_lower.value == f.r_lower.value && e.beta < f.beta) check(e.q > f.q, "monotone in beta");
        }
      }
    }

    {
      Rng a(kSeed), b(kSeed);
      check(bits_equal(simulate_wiener(5000, a).values, simulate_wiener(5000, b).values),
            "Wiener path determinism");
      const auto s1 = simulate_sups(rows, 1000, 1000, kSeed, 1);
      const auto s2 = simulate_sups(rows, 1000, 1000, kSeed, 4);
      check(bits_equal(s1, s2), "sup draws independent of thread count");
      Rng c(kSeed), d(kSeed);
      const auto x1 = draw_sample(2000, make_dgp(1.0, 1.0), c);
      const auto x2 = draw_sample(2000, make_dgp(1.0, 1.0), d);
      check(bits_equal(x1.values(), x2.values()), "draw_sample determinism");
      const auto k1 = select_k(x1), k2 = select_k(x2);
      check(k1.k == k2.k && bits_equal(k1.c_trace, k2.c_trace), "select_k determinism");

      StudyConfig small = study;
      small.n_reps = 50;
      small.methods = {Method::HN, Method::HO, Method::HS, Method::IN, Method::IO, Method::IS};
      small.threads = 1;
      std::ostringstream r1, r2;
      write_study_csv(r1, run_study(small, full));
      small.threads = 3;
      write_study_csv(r2, run_study(small, full));
      check(r1.str() == r2.str(), "study determinism");
    }
    report(5, ok, "property suite");
  }

  // 6. Deterministic Pareto quantile grid.
  {
    const Sample grid(oracle::pareto_grid(10000));
    const double xi = hill(grid, 500).xi_hat;
    const double q = weissman_quantile(grid, 500, 0.001).q_hat;
    std::printf("  xi_hat=%.6f weissman(p=0.001)=%.3f\n", xi, q);
    report(6, std::abs(xi - 1.0) <= 0.05 && std::abs(q / 1000.0 - 1.0) <= 0.10,
           "deterministic grid oracle");
  }

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
