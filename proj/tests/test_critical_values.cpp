#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "tailci/critical_values.hpp"
#include "tailci/error.hpp"

using namespace tailci;

namespace {

WienerPath zero_path(int m) { return WienerPath{std::vector<double>(static_cast<std::size_t>(m), 0.0), 0}; }

// Literal left-truncated Riemann sum, evaluated independently of the library.
double g_reference(const WienerPath& path, int i_r) {
  const int m = path.steps();
  const double r = static_cast<double>(i_r) / m;
  const double w_r = path.values[static_cast<std::size_t>(i_r - 1)];
  double sum = 0.0;
  for (int l = 1; l <= i_r; ++l) {
    const double t = static_cast<double>(l) / m;
    sum += (path.values[static_cast<std::size_t>(l - 1)] / t - w_r / r) / m;
  }
  return sum / r;
}

}  // namespace

TEST_CASE("Wiener paths") {
  Rng a(42);
  Rng b(42);
  const auto p1 = simulate_wiener(1000, a);
  const auto p2 = simulate_wiener(1000, b);
  CHECK(p1.values == p2.values);
  CHECK(p1.seed == 42);

  Rng c(1);
  CHECK(simulate_wiener(50000, c).values.size() == 50000);
  Rng d(1);
  CHECK_THROWS_AS(simulate_wiener(1, d), Error);

  std::vector<double> w1;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    Rng rng(derive_seed(5, {s}));
    w1.push_back(simulate_wiener(50, rng).values.back());
  }
  CHECK(std::abs(oracle::variance(w1) - 1.0) < 0.02);
}

TEST_CASE("G process") {
  const auto zero = zero_path(100);
  for (double r : {0.01, 0.37, 1.0}) CHECK(gaussian_g(zero, r) == 0.0);
  CHECK(sup_statistic(zero, 0.2) == 0.0);

  Rng rng(8);
  const auto path = simulate_wiener(400, rng);
  CHECK(std::isfinite(gaussian_g(path, 1.0 / 400)));
  CHECK(gaussian_g(path, 1.0 / 400) == doctest::Approx(0.0).epsilon(1e-12));  // single point
  CHECK_THROWS_AS(gaussian_g(path, 0.0001), Error);
  try {
    gaussian_g(path, 0.0001);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::resolution);
  }
  for (int i : {1, 2, 17, 200, 399, 400}) {
    CHECK(gaussian_g(path, static_cast<double>(i) / 400) ==
          doctest::Approx(g_reference(path, i)).epsilon(1e-10));
  }
}

TEST_CASE("sup statistic") {
  Rng rng(12);
  const auto path = simulate_wiener(300, rng);
  CHECK(sup_statistic(path, 1.0) == gaussian_g(path, 1.0));

  // Brute force over grid points.
  for (double r_lower : {0.5, 0.1, 1.0 / 300}) {
    double best = -1e300;
    for (int i = static_cast<int>(std::ceil(r_lower * 300 - 1e-9)); i <= 300; ++i) {
      best = std::max(best, std::sqrt(i / 300.0) * g_reference(path, i));
    }
    CHECK(sup_statistic(path, r_lower) == doctest::Approx(best).epsilon(1e-10));
  }

  const auto rows = standard_r_lowers();
  std::vector<double> values;
  for (const auto& r : rows) values.push_back(r.value);
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng g(s);
    const auto p = simulate_wiener(2000, g);
    const auto prof = sup_profile(p, values);
    for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i] >= prof[i - 1]);
  }
  CHECK_THROWS_AS(sup_statistic(path, 0.0), Error);
}

TEST_CASE("sqrt(r) G(r) has a standard normal marginal at r = 1") {
  std::vector<double> draws;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    Rng rng(derive_seed(2024, {s}));
    draws.push_back(gaussian_g(simulate_wiener(1000, rng), 1.0));
  }
  CHECK(std::abs(oracle::variance(draws) - 1.0) < 0.03);
  CHECK(std::abs(oracle::mean(draws)) < 0.03);
}

TEST_CASE("r_lower parsing") {
  CHECK(parse_r_lower("1/100").value == doctest::Approx(0.01));
  CHECK(parse_r_lower("10/11").label == "10/11");
  CHECK(parse_r_lower("0.25").value == 0.25);
  CHECK_THROWS_AS(parse_r_lower("2"), Error);
  CHECK_THROWS_AS(parse_r_lower("1/0"), Error);
  CHECK_THROWS_AS(parse_r_lower("abc"), Error);
  CHECK(standard_r_lowers().size() == 12);
}

TEST_CASE("empirical upper quantile convention") {
  std::vector<double> d(1000);
  for (int i = 0; i < 1000; ++i) d[static_cast<std::size_t>(i)] = i + 1;  // 1..1000
  CHECK(upper_quantile(d, 0.05) == 975.0);
  CHECK(upper_quantile(d, 0.10) == 950.0);
  CHECK(upper_quantile(d, 0.01) == 995.0);
}

TEST_CASE("build_table") {
  const auto rows = standard_r_lowers();
  const auto betas = standard_betas();
  CHECK_THROWS_AS(build_table(rows, betas, 100, 1000, 1), Error);
  CHECK_THROWS_AS(build_table(rows, {0.0}, 1000, 1000, 1), Error);

  const auto t1 = build_table(rows, betas, 1000, 2000, 99);
  const auto t2 = build_table(rows, betas, 1000, 2000, 99, 3);  // thread count is irrelevant
  std::ostringstream a, b;
  write_table(a, t1);
  write_table(b, t2);
  CHECK(a.str() == b.str());
  CHECK(t1.n_sims == 1000);
  CHECK(t1.n_steps == 2000);
  CHECK(t1.seed == 99);
  CHECK(t1.entries.size() == 36);

  // Per-path nesting makes the table monotone exactly.
  for (const auto& e : t1.entries) {
    for (const auto& f : t1.entries) {
      if (e.beta == f.beta && e.r_lower.value < f.r_lower.value) CHECK(e.q >= f.q);
      if (e.r_lower.value == f.r_lower.value && e.beta < f.beta) CHECK(e.q > f.q);
    }
  }
  std::istringstream in(a.str());
  const auto back = read_table(in);
  CHECK(back.entries.size() == 36);
  CHECK(back.seed == 99);
  std::ostringstream c;
  write_table(c, back);
  CHECK(c.str() == a.str());
}

TEST_CASE("lookup") {
  CriticalValueTable t;
  t.n_sims = 20000;
  t.n_steps = 50000;
  t.entries = {{parse_r_lower("1"), 0.05, 1.96}, {parse_r_lower("1/2"), 0.05, 2.54},
               {parse_r_lower("1/4"), 0.05, 2.71}, {parse_r_lower("1"), 0.01, 2.56}};
  auto exact = lookup(t, 0.5, 0.05);
  CHECK(exact.q == 2.54);
  CHECK_FALSE(exact.interpolated);
  auto mid = lookup(t, 0.75, 0.05);
  CHECK(mid.interpolated);
  CHECK(mid.q == doctest::Approx(2.25));
  CHECK(mid.q > 1.96);
  CHECK(mid.q < 2.54);
  try {
    lookup(t, 0.1, 0.05);
    FAIL("expected missing entry");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::missing_entry);
    CHECK(std::string(e.what()).find("cv-table") != std::string::npos);
  }
  CHECK_THROWS_AS(lookup(t, 1.0, 0.10), Error);
}

TEST_CASE("table file parsing errors") {
  std::istringstream no_prov("r_lower beta q\n1 0.05 1.96\n");
  CHECK_THROWS_AS(read_table(no_prov), Error);
  std::istringstream bad_row("seed 1\nn_sims 1000\nn_steps 10\nr_lower beta q\n1 0.05\n");
  CHECK_THROWS_AS(read_table(bad_row), Error);
  CHECK_THROWS_AS(load_table("/nonexistent/table.txt"), Error);
}
