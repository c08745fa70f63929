// Unit tests for decomposition, ratio diagnostics, martingale scan, and
// normality summaries.
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "support/oracles.hpp"
#include "twoway/diagnostics.hpp"
#include "twoway/estimators.hpp"
#include "twoway/math.hpp"
#include "twoway/rng.hpp"

using namespace twoway;

namespace {

DgpSpec make_spec(std::size_t n, std::size_t t, std::size_t j, double delta,
                  double phi) {
  DgpSpec s;
  s.n_rows = n;
  s.n_cols = t;
  s.n_factors = j;
  s.delta = delta;
  s.phi = phi;
  return s;
}

double sum_all(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace

// ---- decomposition ----

TEST_CASE("variance shares match their closed forms") {
  const auto spec = make_spec(50, 50, 4, 1.0, 0.0);
  const auto parts = hoeffding_decompose(spec, sample_latents(spec, 3));
  CHECK(parts.variance_shares.l == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(parts.variance_shares.w == doctest::Approx(1e-4).epsilon(1e-14));
  CHECK(parts.variance_shares.r == 0.0);

  const auto pure_noise = make_spec(10, 20, 1, 0.0, 2.0);
  const auto p2 = hoeffding_decompose(pure_noise, sample_latents(pure_noise, 4));
  CHECK(p2.variance_shares.l == 0.0);
  CHECK(p2.variance_shares.w == doctest::Approx(1.0 / 200.0).epsilon(1e-14));
  CHECK(p2.variance_shares.r == doctest::Approx(4.0 / 200.0).epsilon(1e-14));
}

TEST_CASE("components sum to the centered sample mean across the grid") {
  for (double delta : {0.0, 0.5, 1.0})
    for (std::size_t j : {std::size_t{1}, std::size_t{5}, std::size_t{50}})
      for (double phi : {0.0, 0.5, 1.0}) {
        const auto spec = make_spec(20, 20, j, delta, phi);
        const auto lat = sample_latents(spec, derive_seed(17, 9 * j + static_cast<std::uint64_t>(2 * delta + 3 * phi)));
        const auto panel = assemble_panel(spec, lat);
        const auto parts = hoeffding_decompose(spec, lat);
        const double sa = sum_all(parts.a), sb = sum_all(parts.b);
        const double sw = sum_all(parts.w.data), sr = sum_all(parts.r.data);
        const double centered = sample_mean(panel) - true_mean(spec);
        const double err = std::abs(centered - (sa + sb + sw + sr));
        const double scale = std::abs(centered) + std::abs(sa) + std::abs(sb) +
                             std::abs(sw) + std::abs(sr) + 1e-30;
        CHECK(err <= 1e-10 * scale);
      }
}

TEST_CASE("component sums have the advertised variances by Monte Carlo") {
  const auto spec = make_spec(12, 12, 4, 1.0, 0.5);
  const auto shares =
      hoeffding_decompose(spec, sample_latents(spec, 1)).variance_shares;
  const int reps = 20000;
  std::vector<double> row_sums(reps), inter_sums(reps), noise_sums(reps),
      totals(reps);
  RngStream rng(derive_seed(20260822, 21));
  for (int r = 0; r < reps; ++r) {
    const auto lat = sample_latents(spec, rng);
    const auto parts = hoeffding_decompose(spec, lat);
    const auto k = static_cast<std::size_t>(r);
    row_sums[k] = sum_all(parts.a) + sum_all(parts.b);
    inter_sums[k] = sum_all(parts.w.data);
    noise_sums[k] = sum_all(parts.r.data);
    totals[k] = row_sums[k] + inter_sums[k] + noise_sums[k];
  }
  CHECK(sample_variance(row_sums) == doctest::Approx(shares.l).epsilon(0.05));
  CHECK(sample_variance(inter_sums) == doctest::Approx(shares.w).epsilon(0.05));
  CHECK(sample_variance(noise_sums) == doctest::Approx(shares.r).epsilon(0.05));
  CHECK(sample_variance(totals) ==
        doctest::Approx(shares.l + shares.w + shares.r).epsilon(0.05));
  const auto mt = oracles::mean_se(totals);
  CHECK(std::abs(mt.mean) < 4.0 * mt.se);
}

TEST_CASE("decompose rejects mismatched latents") {
  const auto spec = make_spec(4, 4, 2, 0.5, 0.5);
  const auto other = sample_latents(make_spec(5, 4, 2, 0.5, 0.5), 1);
  CHECK_THROWS_AS(hoeffding_decompose(spec, other), std::invalid_argument);
}

// ---- ratio diagnostics ----

TEST_CASE("assumption_report matches closed forms for uniform weights") {
  const auto spec = make_spec(50, 50, 4, 1.0, 0.0);
  const auto rep = assumption_report(spec, 200000, 99);

  CHECK(rep.eigen_ratio == 0.25);
  CHECK(rep.mc_std_errors.eigen == 0.0);

  // hall -> 1/J, lyapunov -> (3 + 6/J)/N
  CHECK(rep.mc_std_errors.hall > 0.0);
  CHECK(std::abs(rep.hall_ratio - 0.25) < 4.0 * rep.mc_std_errors.hall);
  CHECK(rep.mc_std_errors.lyapunov > 0.0);
  CHECK(std::abs(rep.lyapunov_ratio - 0.09) < 4.0 * rep.mc_std_errors.lyapunov);

  // first ratio -> 6 delta^4 / (2 N delta^4 + N^3)
  const double first = 6.0 / (2.0 * 50.0 + 125000.0);
  CHECK(std::abs(rep.a2_first_ratio - first) < 4.0 * rep.mc_std_errors.a2_first);
  // second ratio -> 2 N delta^2 (1 + 2/J) / (2 delta^4 + N^2)
  const double second = 2.0 * 50.0 * 1.5 / (2.0 + 2500.0);
  CHECK(std::abs(rep.a2_second_ratio - second) <
        4.0 * rep.mc_std_errors.a2_second);
}

TEST_CASE("degenerate factor shift zeroes the linear-kernel ratios") {
  const auto spec = make_spec(50, 50, 4, 0.0, 0.0);
  const auto rep = assumption_report(spec, 20000, 5);
  CHECK(rep.a2_first_ratio == 0.0);
  CHECK(rep.a2_second_ratio == 0.0);
  CHECK(std::abs(rep.hall_ratio - 0.25) < 4.0 * rep.mc_std_errors.hall);
}

TEST_CASE("single factor concentrates every ratio at its extreme") {
  const auto spec = make_spec(50, 50, 1, 0.0, 0.5);
  const auto rep = assumption_report(spec, 200000, 14);
  CHECK(rep.eigen_ratio == 1.0);
  CHECK(std::abs(rep.hall_ratio - 1.0) < 4.0 * rep.mc_std_errors.hall);
  CHECK(std::abs(rep.lyapunov_ratio - 9.0 / 50.0) <
        4.0 * rep.mc_std_errors.lyapunov);
}

TEST_CASE("hall_ratio cross-checked against an unrelated generator") {
  const auto spec = make_spec(50, 50, 2, 0.0, 0.0);
  const auto rep = assumption_report(spec, 100000, 8);

  // independent estimate of E[(sum_j w_j^2 a_j a_j')^2] / (E[w^2])^2
  oracles::MtNormal ref(424242);
  const int m = 100000;
  std::vector<double> num(m), den(m);
  for (int d = 0; d < m; ++d) {
    double ca = 0.0, w = 0.0;
    for (int j = 0; j < 2; ++j) {
      const double a1 = ref(), a2 = ref(), g1 = ref();
      ca += 0.25 * a1 * a2;
      w += 0.5 * a1 * g1;
    }
    num[static_cast<std::size_t>(d)] = ca * ca;
    den[static_cast<std::size_t>(d)] = w * w;
  }
  const auto mn = oracles::mean_se(num);
  const auto md = oracles::mean_se(den);
  const double ref_ratio = mn.mean / (md.mean * md.mean);
  // both estimates target 1/J = 0.5
  CHECK(std::abs(rep.hall_ratio - 0.5) < 4.0 * rep.mc_std_errors.hall);
  CHECK(std::abs(ref_ratio - 0.5) < 0.05);
  CHECK(rep.hall_ratio == doctest::Approx(ref_ratio).epsilon(0.1));
}

TEST_CASE("ratios are invariant under rescaling the weights") {
  auto spec = make_spec(30, 30, 3, 0.7, 0.2);
  spec.weights = {1.0, 2.0, 3.0};
  auto doubled = spec;
  doubled.weights = {2.0, 4.0, 6.0};
  const auto a = assumption_report(spec, 20000, 31);
  const auto b = assumption_report(doubled, 20000, 31);
  // power-of-two rescaling leaves every self-normalized ratio bit-identical
  CHECK(a.lyapunov_ratio == b.lyapunov_ratio);
  CHECK(a.hall_ratio == b.hall_ratio);
  CHECK(a.a2_first_ratio == b.a2_first_ratio);
  CHECK(a.a2_second_ratio == b.a2_second_ratio);
  CHECK(a.eigen_ratio == b.eigen_ratio);
}

TEST_CASE("eigen_ratio pins uniform and single-factor weights") {
  CHECK(assumption_report(make_spec(4, 4, 50, 0.0, 0.0), 1000, 1).eigen_ratio ==
        0.02);
  CHECK(assumption_report(make_spec(4, 4, 100, 0.0, 0.0), 1000, 1).eigen_ratio ==
        0.01);
  auto lopsided = make_spec(4, 4, 2, 0.0, 0.0);
  lopsided.weights = {3.0, 1.0};
  CHECK(assumption_report(lopsided, 1000, 1).eigen_ratio ==
        doctest::Approx(0.82).epsilon(1e-12));
}

TEST_CASE("assumption_report is deterministic and mode independent") {
  const auto spec = make_spec(20, 20, 2, 0.5, 0.5);
  const auto a = assumption_report(spec, 5000, 77, ExecMode::Parallel);
  const auto b = assumption_report(spec, 5000, 77, ExecMode::Serial);
  CHECK(a.lyapunov_ratio == b.lyapunov_ratio);
  CHECK(a.hall_ratio == b.hall_ratio);
  CHECK(a.a2_first_ratio == b.a2_first_ratio);
  CHECK(a.a2_second_ratio == b.a2_second_ratio);
  CHECK(a.mc_std_errors.lyapunov == b.mc_std_errors.lyapunov);
  CHECK_THROWS_AS(assumption_report(spec, 999, 1), std::invalid_argument);
}

// ---- martingale scan ----

TEST_CASE("martingale scan partitions the interaction sum") {
  const auto spec = make_spec(6, 9, 2, 0.7, 0.3);
  const auto lat = sample_latents(spec, 12);
  const auto u = martingale_sequence(spec, lat);
  REQUIRE(u.size() == 9);
  const auto parts = hoeffding_decompose(spec, lat);
  const double sigma = std::sqrt(parts.variance_shares.w);
  const double total_u = sum_all(u) * sigma;
  const double total_w = sum_all(parts.w.data);
  CHECK(std::abs(total_u - total_w) <=
        1e-12 * (std::abs(total_w) + std::abs(total_u) + 1e-30));
}

TEST_CASE("martingale scan requires no more rows than columns") {
  const auto spec = make_spec(5, 4, 1, 0.0, 0.0);
  CHECK_THROWS_AS(martingale_sequence(spec, sample_latents(spec, 1)),
                  std::invalid_argument);
}

TEST_CASE("martingale increments have the pattern variances") {
  // Var(U_s) = (2s-1)/(NT) while the scan is inside the square, 1/T after
  const auto spec = make_spec(4, 6, 2, 0.5, 0.0);
  const int reps = 20000;
  std::vector<std::vector<double>> u_sq(6, std::vector<double>(reps));
  RngStream rng(derive_seed(20260822, 31));
  for (int r = 0; r < reps; ++r) {
    const auto u = martingale_sequence(spec, sample_latents(spec, rng));
    for (std::size_t s = 0; s < 6; ++s)
      u_sq[s][static_cast<std::size_t>(r)] = u[s] * u[s];
  }
  for (std::size_t s = 0; s < 6; ++s) {
    const double want =
        (s < 4 ? (2.0 * static_cast<double>(s) + 1.0) : 4.0) / 24.0;
    const auto ms = oracles::mean_se(u_sq[s]);
    CHECK(std::abs(ms.mean - want) < 4.0 * ms.se);
  }
}

TEST_CASE("summed martingale increments have unit variance") {
  const auto spec = make_spec(10, 10, 2, 0.7, 0.0);
  const int reps = 100000;
  std::vector<double> sums(reps);
  RngStream rng(derive_seed(20260822, 32));
  for (int r = 0; r < reps; ++r)
    sums[static_cast<std::size_t>(r)] =
        sum_all(martingale_sequence(spec, sample_latents(spec, rng)));
  CHECK(sample_variance(sums) == doctest::Approx(1.0).epsilon(0.03));
  const auto ms = oracles::mean_se(sums);
  CHECK(std::abs(ms.mean) < 4.0 * ms.se);
}

// ---- vanishing moments ----

TEST_CASE("moments with a lone row or column index vanish") {
  const auto spec = make_spec(8, 8, 2, 0.5, 0.5);
  const std::vector<std::vector<std::pair<int, int>>> zero_patterns = {
      {{1, 1}},
      {{1, 1}, {2, 2}},
      {{1, 2}, {2, 1}},
      {{1, 1}, {1, 2}, {2, 1}},
  };
  std::uint64_t key = 100;
  for (const auto& pat : zero_patterns) {
    const auto est = vanishing_moment_check(spec, pat, 100000, key++);
    CHECK(est.std_error > 0.0);
    CHECK(std::abs(est.estimate) <= 4.0 * est.std_error);
  }
}

TEST_CASE("fully paired patterns do not vanish") {
  const auto spec = make_spec(8, 8, 2, 0.5, 0.5);
  // repeated cell: E[w^2] = sum of squared weights = 1/J
  const std::vector<std::pair<int, int>> twice = {{1, 1}, {1, 1}};
  const auto e2 = vanishing_moment_check(spec, twice, 100000, 7);
  CHECK(std::abs(e2.estimate - 0.5) < 4.0 * e2.std_error);

  // four-cycle: E[w11 w12 w21 w22] = sum of fourth powers = 1/J^3
  const std::vector<std::pair<int, int>> cycle = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  const auto e4 = vanishing_moment_check(spec, cycle, 200000, 8);
  CHECK(e4.estimate > 4.0 * e4.std_error);
  CHECK(std::abs(e4.estimate - 0.125) < 4.0 * e4.std_error);

  // independent brute-force estimate of the same moment
  oracles::MtNormal ref(9090);
  const int m = 200000;
  std::vector<double> prods(m);
  for (int d = 0; d < m; ++d) {
    double a1[2], a2[2], g1[2], g2[2];
    for (int j = 0; j < 2; ++j) {
      a1[j] = ref();
      a2[j] = ref();
      g1[j] = ref();
      g2[j] = ref();
    }
    auto w = [](const double* a, const double* g) {
      return 0.5 * a[0] * g[0] + 0.5 * a[1] * g[1];
    };
    prods[static_cast<std::size_t>(d)] =
        w(a1, g1) * w(a1, g2) * w(a2, g1) * w(a2, g2);
  }
  const auto ms = oracles::mean_se(prods);
  CHECK(std::abs(e4.estimate - ms.mean) <
        4.0 * std::sqrt(e4.std_error * e4.std_error + ms.se * ms.se));
}

TEST_CASE("vanishing_moment_check validates its inputs") {
  const auto spec = make_spec(4, 4, 1, 0.0, 0.0);
  const std::vector<std::pair<int, int>> empty;
  CHECK_THROWS_AS(vanishing_moment_check(spec, empty, 10000, 1),
                  std::invalid_argument);
  const std::vector<std::pair<int, int>> out = {{0, 1}};
  CHECK_THROWS_AS(vanishing_moment_check(spec, out, 10000, 1),
                  std::invalid_argument);
  const std::vector<std::pair<int, int>> big = {{5, 1}};
  CHECK_THROWS_AS(vanishing_moment_check(spec, big, 10000, 1),
                  std::invalid_argument);
  const std::vector<std::pair<int, int>> ok = {{1, 1}};
  CHECK_THROWS_AS(vanishing_moment_check(spec, ok, 5000, 1),
                  std::invalid_argument);
}

// ---- normality summaries ----

TEST_CASE("gaussian samples score a small sup distance") {
  RngStream rng(61);
  std::vector<double> draws(100000);
  for (auto& d : draws) d = rng.next_normal();
  const auto stats = normality_stats(draws);
  CHECK(stats.ks_distance < 0.01);
  CHECK(stats.qq_points.size() == 199);
}

TEST_CASE("product-normal samples score a large sup distance") {
  RngStream rng(62);
  std::vector<double> draws(100000);
  for (auto& d : draws) d = rng.next_normal() * rng.next_normal();
  const auto stats = normality_stats(draws);
  CHECK(stats.ks_distance > 0.05);
}

TEST_CASE("normality stats are invariant under positive affine maps") {
  RngStream rng(63);
  std::vector<double> x(5000);
  for (auto& v : x) v = rng.next_normal();

  // power-of-two scale: identical bit for bit
  std::vector<double> scaled(x);
  for (auto& v : scaled) v *= 4.0;
  const auto a = normality_stats(x), b = normality_stats(scaled);
  CHECK(a.ks_distance == b.ks_distance);
  CHECK(b.standardized_sample_mean == 4.0 * a.standardized_sample_mean);
  CHECK(b.standardized_sample_sd == 4.0 * a.standardized_sample_sd);
  for (std::size_t i = 0; i < a.qq_points.size(); ++i) {
    CHECK(a.qq_points[i].first == b.qq_points[i].first);
    CHECK(a.qq_points[i].second == b.qq_points[i].second);
  }

  // general affine map: equal to rounding
  std::vector<double> moved(x);
  for (auto& v : moved) v = 1.5 * v + 2.25;
  const auto c = normality_stats(moved);
  CHECK(c.ks_distance == doctest::Approx(a.ks_distance).epsilon(1e-12));
}

TEST_CASE("qq grid shape and monotonicity") {
  RngStream rng(64);
  std::vector<double> draws(2000);
  for (auto& d : draws) d = rng.next_normal();
  const auto stats = normality_stats(draws, 19);
  REQUIRE(stats.qq_points.size() == 19);
  for (std::size_t i = 1; i < 19; ++i) {
    CHECK(stats.qq_points[i].first > stats.qq_points[i - 1].first);
    CHECK(stats.qq_points[i].second >= stats.qq_points[i - 1].second);
  }
  // the middle of 19 points sits at the median
  CHECK(stats.qq_points[9].first == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(stats.standardized_sample_mean == mean(draws));
  CHECK(stats.standardized_sample_sd == sample_sd(draws));
}

TEST_CASE("normality_stats validates its inputs") {
  std::vector<double> few(50, 1.0);
  CHECK_THROWS_AS(normality_stats(few), std::invalid_argument);
  std::vector<double> flat(200, 3.0);
  CHECK_THROWS_AS(normality_stats(flat), std::invalid_argument);
  RngStream rng(1);
  std::vector<double> ok(200);
  for (auto& v : ok) v = rng.next_normal();
  CHECK_THROWS_AS(normality_stats(ok, 0), std::invalid_argument);
}
