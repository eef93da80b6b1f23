// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is pinned in code; runtimes are asserted where budgeted.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "test_helpers.hpp"
#include "xiboot/bootstrap.hpp"
#include "xiboot/enumeration.hpp"
#include "xiboot/sample.hpp"
#include "xiboot/simulation.hpp"
#include "xiboot/theory.hpp"
#include "xiboot/xi.hpp"

using namespace xiboot;

namespace {

constexpr std::uint64_t kSeed = 20230415;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

using Criterion = std::function<void(Outcome&)>;

void expect(Outcome& o, bool condition, const std::string& what) {
  if (!condition) {
    o.pass = false;
    o.detail << "  <-- FAILED: " << what;
  }
}

double coverage_of(const SimulationCell& cell, CiMethod method, double alpha) {
  for (const auto& cov : cell.coverage) {
    if (cov.method == method && cov.alpha == alpha) return cov.rate;
  }
  return -1.0;
}

// --- 1. limiting null distribution of the statistic ------------------------

void null_clt(Outcome& o) {
  const std::int64_t n = 1000;
  const int reps = 5000;
  std::vector<double> scaled(reps);
  const RngStream root = RngStream(kSeed).derive(1);
  for (int rep = 0; rep < reps; ++rep) {
    const auto draw = gaussian_rotation_sample(0.0, n, root.derive(rep));
    scaled[rep] = std::sqrt(static_cast<double>(n)) * xi_simple(draw.sample).value;
  }
  const double var = testutil::sample_variance(scaled);
  const double ks = testutil::ks_distance_normal(scaled, 0.4);
  o.detail << "var(sqrt(n) xi) = " << var << " in [0.37, 0.43]; KS = " << ks << " <= 0.03";
  expect(o, var >= 0.37 && var <= 0.43, "variance outside [0.37, 0.43]");
  expect(o, ks <= 0.03, "KS distance above 0.03");
}

// --- 2. replicate mean drifts to 1/e ---------------------------------------

void replicate_mean(Outcome& o) {
  const std::int64_t n = 1000;
  const int samples = 100, b_count = 200;
  const RngStream root = RngStream(kSeed).derive(2);
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto draw = gaussian_rotation_sample(0.0, n, root.derive(s).derive(0));
    const auto dist =
        bootstrap_distribution(draw.sample, b_count, root.derive(s).derive(1), BootStatistic::hat);
    acc += testutil::mean(dist.values);
  }
  const double mean = acc / samples;
  o.detail << "mean replicate value = " << mean << ", |mean - 1/e| = "
           << std::fabs(mean - 0.367879441) << " <= 0.02";
  expect(o, std::fabs(mean - 0.367879441) <= 0.02, "replicate mean too far from 1/e");
}

// --- 3. conditional-variance deficit ----------------------------------------

void variance_deficit(Outcome& o) {
  const std::int64_t n = 1000;
  const int sims = 500, b_count = 500;
  const RngStream root = RngStream(kSeed).derive(3);
  std::vector<double> v2(sims);
  for (int s = 0; s < sims; ++s) {
    const auto draw = gaussian_rotation_sample(0.0, n, root.derive(s).derive(0));
    const auto dist =
        bootstrap_distribution(draw.sample, b_count, root.derive(s).derive(1), BootStatistic::hat);
    v2[s] = var_b2(dist);
  }
  const double mean = testutil::mean(v2);
  o.detail << "n * mean(V-B2) = " << mean << " in [0.28, 0.395], below 0.4 by >= 0.005";
  expect(o, mean >= 0.28 && mean <= 0.395, "outside [0.28, 0.395]");
  expect(o, mean <= 0.4 - 0.005, "not separated from the null variance");
}

// --- 4 & 5. coverage-study rows ---------------------------------------------

SimulationCell run_row(double rho) {
  SimulationConfig config;
  config.rho_grid = {rho};
  config.n_grid = {1000};
  config.replications = 500;
  config.bootstrap_size = 500;
  config.alphas = {0.05, 0.1};
  config.master_seed = kSeed;
  config.workers = 0;
  return run_simulation(config).cells.at(0);
}

void table_row_rho0(Outcome& o) {
  const SimulationCell cell = run_row(0.0);
  o.detail << "V-B1 rmse = " << cell.rmse_b1 << " (135.65 +- 15); V-B2 rmse = " << cell.rmse_b2
           << " (0.09 +- 0.02); cov HB1@.05 = " << coverage_of(cell, CiMethod::hb1, 0.05)
           << " (<= 0.01); cov HB2@.05 = " << coverage_of(cell, CiMethod::hb2, 0.05)
           << " (0.92 +- 0.03); cov HB2@.1 = " << coverage_of(cell, CiMethod::hb2, 0.1)
           << " (0.86 +- 0.03); cov OracleVar@.05 = "
           << coverage_of(cell, CiMethod::oracle_var, 0.05) << " (0.95 +- 0.03)";
  expect(o, std::fabs(cell.rmse_b1 - 135.65) <= 15.0, "V-B1 rmse");
  expect(o, std::fabs(cell.rmse_b2 - 0.09) <= 0.02, "V-B2 rmse");
  expect(o, coverage_of(cell, CiMethod::hb1, 0.05) <= 0.01, "HB1 coverage at 0.05");
  expect(o, std::fabs(coverage_of(cell, CiMethod::hb2, 0.05) - 0.92) <= 0.03,
         "HB2 coverage at 0.05");
  expect(o, std::fabs(coverage_of(cell, CiMethod::hb2, 0.1) - 0.86) <= 0.03,
         "HB2 coverage at 0.1");
  // the known-variance normal interval is the sanity baseline
  expect(o, std::fabs(coverage_of(cell, CiMethod::oracle_var, 0.05) - 0.95) <= 0.03,
         "oracle-variance coverage at 0.05");
  expect(o, std::fabs(coverage_of(cell, CiMethod::oracle_var, 0.1) - 0.90) <= 0.03,
         "oracle-variance coverage at 0.1");
}

void table_row_rho07(Outcome& o) {
  const SimulationCell cell = run_row(0.7);
  o.detail << "V-B2 rmse = " << cell.rmse_b2 << " (0.26 +- 0.03 vs target 0.47); cov HB2@.05 = "
           << coverage_of(cell, CiMethod::hb2, 0.05) << " (0.81 +- 0.04)";
  expect(o, std::fabs(cell.variance_target - 0.47) < 1e-12, "variance target should be 0.47");
  expect(o, std::fabs(cell.rmse_b2 - 0.26) <= 0.03, "V-B2 rmse");
  expect(o, std::fabs(coverage_of(cell, CiMethod::hb2, 0.05) - 0.81) <= 0.04,
         "HB2 coverage at 0.05");
}

// --- 6. rank-difference sum identity ----------------------------------------

void rank_sum_identity(Outcome& o) {
  const RngStream root = RngStream(kSeed).derive(6);
  std::int64_t failures = 0, cases = 0;
  for (std::int64_t n : {5, 50, 200}) {
    RngStream rng = root.derive(static_cast<std::uint64_t>(n));
    for (int trial = 0; trial < 10000; ++trial) {
      const auto s = testutil::random_tie_free(n, rng);
      const auto w = testutil::random_weights(n, rng);
      const XOrdering ord = order_by_x(s.x());
      const RankVectors rv = compute_ranks(s.y());
      std::vector<std::int32_t> rank_by_x(n), w_by_x(n);
      for (std::int64_t p = 0; p < n; ++p) {
        rank_by_x[p] = rv.r[ord.perm[p]];
        w_by_x[p] = w.w[ord.perm[p]];
      }
      const std::int64_t hat = hat_rank_diff_sum(rank_by_x, w_by_x);
      const std::int64_t mat =
          materialized_rank_diff_sum(s, w, TieBreak::seeded(static_cast<std::uint64_t>(trial)));
      ++cases;
      if (hat != mat) ++failures;
    }
  }
  // exhaustive tie-break orderings at n = 6
  RngStream rng6 = root.derive(600);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = testutil::random_tie_free(6, rng6);
    const auto w = testutil::random_weights(6, rng6);
    std::vector<double> xr, yr;
    for (std::int64_t i = 0; i < 6; ++i) {
      for (int c = 0; c < w.w[i]; ++c) {
        xr.push_back(s.x()[i]);
        yr.push_back(s.y()[i]);
      }
    }
    const XOrdering ord = order_by_x(s.x());
    const RankVectors rv = compute_ranks(s.y());
    std::vector<std::int32_t> rank_by_x(6), w_by_x(6);
    for (std::int64_t p = 0; p < 6; ++p) {
      rank_by_x[p] = rv.r[ord.perm[p]];
      w_by_x[p] = w.w[ord.perm[p]];
    }
    const std::int64_t hat = hat_rank_diff_sum(rank_by_x, w_by_x);
    const auto rres = compute_ranks(yr);
    testutil::for_each_tie_break_ordering(xr, [&](std::span<const std::int32_t> order) {
      std::int64_t sum = 0;
      for (std::size_t p = 0; p + 1 < order.size(); ++p) {
        sum += std::abs(static_cast<std::int64_t>(rres.r[order[p + 1]]) - rres.r[order[p]]);
      }
      ++cases;
      if (sum != hat) ++failures;
    });
  }
  o.detail << failures << " failures over " << cases << " integer-identity cases";
  expect(o, failures == 0, "rank-difference sums disagreed");
}

// --- 7. gap bound between the two reformulations ----------------------------

void window_vs_nn_bound(Outcome& o) {
  RngStream rng = RngStream(kSeed).derive(7);
  std::int64_t failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::int64_t n = 2 + rng.below(250);
    const auto s = testutil::random_tie_free(n, rng);
    const auto w = testutil::random_weights(n, rng);
    const double gap = std::fabs(xi_bar_b(s, w) - xi_hat_b(s, w));
    if (gap > 6.0 * static_cast<double>(n) / static_cast<double>(n * n - 1) + 1e-12) ++failures;
  }
  o.detail << failures << " bound violations over 10000 cases";
  expect(o, failures == 0, "|bar - hat| exceeded 6n/(n^2-1)");
}

// --- 8. decay of the hat-vs-direct gap ---------------------------------------

void hat_vs_direct_decay(Outcome& o) {
  const RngStream root = RngStream(kSeed).derive(8);
  std::vector<double> scaled;
  for (std::int64_t n : {100, 400, 1600}) {
    RngStream rng = root.derive(static_cast<std::uint64_t>(n));
    double acc = 0.0;
    int count = 0;
    for (int s = 0; s < 60; ++s) {
      const auto draw = gaussian_rotation_sample(0.0, n, rng.derive(2 * s));
      RngStream boot = rng.derive(2 * s + 1);
      for (int b = 0; b < 25; ++b) {
        RngStream stream = boot.derive(b);
        BootstrapWeights w = draw_weights(n, stream);
        while (resample_is_degenerate(draw.sample, w)) w = draw_weights(n, stream);
        const double diff = xi_hat_b(draw.sample, w) - xi_boot_direct(draw.sample, w);
        acc += diff * diff;
        ++count;
      }
    }
    scaled.push_back(static_cast<double>(n) * acc / count);
  }
  o.detail << "n E[(hat - direct)^2] at n = 100, 400, 1600: " << scaled[0] << ", " << scaled[1]
           << ", " << scaled[2];
  expect(o, scaled[0] > scaled[1] && scaled[1] > scaled[2], "sequence not decreasing");
  expect(o, scaled[2] < 0.01, "not below 0.01 at n = 1600");
}

// --- 9. enumeration oracles ---------------------------------------------------

void enumeration_oracles(Outcome& o) {
  // multinomial moments, exact for every admissible set-size triple
  bool moments_ok = true;
  for (int n : {4, 5, 6}) {
    for (int s = 0; s <= n && moments_ok; ++s) {
      for (int s2 = 0; s + s2 <= n && moments_ok; ++s2) {
        for (int t = 0; s + s2 + t <= n && moments_ok; ++t) {
          const auto closed = theory::multinomial_moments_exact(s, s2, t, n);
          const auto brute = enumeration::enumerate_multinomial_moments(s, s2, t, n);
          moments_ok = closed.m1 == brute.m1 && closed.m2 == brute.m2 &&
                       closed.m_cross == brute.m_cross;
        }
      }
    }
  }
  expect(o, moments_ok, "multinomial moments vs enumeration");

  // conditional mean, exact rational equality
  RngStream rng = RngStream(kSeed).derive(9);
  bool cond_ok = true;
  for (int n : {4, 5}) {
    const auto s = testutil::random_tie_free(n, rng);
    const auto y = testutil::y_in_x_order(s);
    cond_ok = cond_ok &&
              theory::cond_exp_xibar_exact(y) == enumeration::enumerate_cond_exp_xibar(y);
  }
  expect(o, cond_ok, "conditional mean vs enumeration");

  // cardinality expectations at n = 6, one million draws, 4 SE
  const auto mc = enumeration::mc_card_expectations(6, 1000000, rng.derive(1));
  const auto closed = theory::card_expectation_table(6);
  const double checks[14][3] = {
      {closed.s12_mean, mc.mean.s12_mean, mc.se.s12_mean},
      {closed.s12_sq, mc.mean.s12_sq, mc.se.s12_sq},
      {closed.s1234_mean, mc.mean.s1234_mean, mc.se.s1234_mean},
      {closed.s1234_sq, mc.mean.s1234_sq, mc.se.s1234_sq},
      {closed.s1234_s12d34, mc.mean.s1234_s12d34, mc.se.s1234_s12d34},
      {closed.s1234_s34d12, mc.mean.s1234_s34d12, mc.se.s1234_s34d12},
      {closed.s12d34_s34d12, mc.mean.s12d34_s34d12, mc.se.s12d34_s34d12},
      {closed.s1223_mean, mc.mean.s1223_mean, mc.se.s1223_mean},
      {closed.s1223_sq, mc.mean.s1223_sq, mc.se.s1223_sq},
      {closed.s1223_s12d23, mc.mean.s1223_s12d23, mc.se.s1223_s12d23},
      {closed.s1223_s23d12, mc.mean.s1223_s23d12, mc.se.s1223_s23d12},
      {closed.s12d23_s23d12, mc.mean.s12d23_s23d12, mc.se.s12d23_s23d12},
      {closed.ind_s1234, mc.mean.ind_s1234, mc.se.ind_s1234},
      {closed.ind_s34d12, mc.mean.ind_s34d12, mc.se.ind_s34d12},
  };
  double max_z = 0.0;
  for (const auto& row : checks) {
    max_z = std::max(max_z, std::fabs(row[1] - row[0]) / std::max(row[2], 1e-300));
  }
  expect(o, max_z <= 4.0, "cardinality expectations beyond 4 MC SE");

  // weighted reversed-rank mean: exact at n = 2, 3; MC at n = 5
  bool weighted_ok = true;
  for (int n : {2, 3}) {
    std::vector<std::int32_t> inc(n);
    for (int i = 0; i < n; ++i) inc[i] = i + 1;
    weighted_ok =
        weighted_ok && enumeration::enumerate_weighted_l_sum(inc) == theory::weighted_l_mean_exact(n);
  }
  expect(o, weighted_ok, "weighted reversed-rank mean vs enumeration");
  const auto wmc = enumeration::mc_weighted_l_mean(5, 1000000, rng.derive(2));
  expect(o, std::fabs(wmc.mean - 17.6) <= 4.0 * wmc.se, "weighted reversed-rank mean vs MC");

  o.detail << "moments/cond-mean/weighted-mean exact; card-table max |z| = " << max_z;
}

// --- 10. conditional-variance band -------------------------------------------

void cond_var_band(Outcome& o) {
  const RngStream root = RngStream(kSeed).derive(10);

  // calibrate the remainder constant on an n-grid: exact enumeration at small
  // n, tight Monte Carlo at moderate n
  double c_cal = 0.0;
  for (int n : {6, 7, 8}) {
    for (int rep = 0; rep < 2; ++rep) {
      const auto draw = gaussian_rotation_sample(0.0, n, root.derive(100 + n).derive(rep));
      const auto y = testutil::y_in_x_order(draw.sample);
      const double diff = std::fabs(
          static_cast<double>(enumeration::enumerate_cond_var_xibar(y)) -
          theory::cond_var_xibar(y));
      c_cal = std::max(c_cal, diff * n * n);
    }
  }
  for (int n : {16, 24}) {
    for (int rep = 0; rep < 2; ++rep) {
      const auto draw = gaussian_rotation_sample(0.0, n, root.derive(200 + n).derive(rep));
      const auto mc = enumeration::mc_cond_var_xibar(draw.sample, 2000000,
                                                     root.derive(300 + n).derive(rep));
      const double diff = std::fabs(mc.variance - theory::cond_var_xibar(draw.sample));
      c_cal = std::max(c_cal, (diff + 4.0 * mc.se) * n * n);
    }
  }
  const double band30 = 1.75 * c_cal / 900.0;

  int failures = 0;
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto draw = gaussian_rotation_sample(0.0, 30, root.derive(400).derive(rep));
    const double closed = theory::cond_var_xibar(draw.sample);
    const auto mc = enumeration::mc_cond_var_xibar(draw.sample, 200000, root.derive(500).derive(rep));
    const double allowed = 4.0 * mc.se + band30;
    const double diff = std::fabs(closed - mc.variance);
    worst = std::max(worst, diff / allowed);
    if (diff > allowed) ++failures;
  }
  o.detail << "calibrated constant = " << c_cal << ", band at n=30 = " << band30
           << ", worst |diff|/band = " << worst << ", failures = " << failures << "/20";
  expect(o, failures == 0, "closed-form conditional variance left its band");
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Criterion run;
    double budget_seconds;  // 0 = no budget asserted
  };
  const std::vector<Entry> criteria = {
      {1, "null-clt", null_clt, 120.0},
      {2, "replicate-mean-one-over-e", replicate_mean, 300.0},
      {3, "variance-deficit", variance_deficit, 0.0},
      {4, "coverage-row-rho0", table_row_rho0, 1800.0},
      {5, "coverage-row-rho07", table_row_rho07, 0.0},
      {6, "rank-sum-identity", rank_sum_identity, 0.0},
      {7, "window-vs-nn-bound", window_vs_nn_bound, 0.0},
      {8, "hat-vs-direct-decay", hat_vs_direct_decay, 0.0},
      {9, "enumeration-oracles", enumeration_oracles, 0.0},
      {10, "cond-var-band", cond_var_band, 0.0},
  };

  int failures = 0;
  for (const auto& entry : criteria) {
    Outcome outcome;
    const auto started = std::chrono::steady_clock::now();
    entry.run(outcome);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (entry.budget_seconds > 0.0 && elapsed > entry.budget_seconds) {
      outcome.pass = false;
      outcome.detail << "  <-- FAILED: runtime budget " << entry.budget_seconds << " s exceeded";
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] %2d %-26s %s  (%.1f s)\n", outcome.pass ? "PASS" : "FAIL", entry.id,
                entry.name, outcome.detail.str().c_str(), elapsed);
    std::fflush(stdout);
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
