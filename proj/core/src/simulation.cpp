#include "xiboot/simulation.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "xiboot/errors.hpp"
#include "xiboot/sample.hpp"
#include "xiboot/xi.hpp"
#include "xiboot/xi_oracle.hpp"

namespace xiboot {

std::map<double, double> default_variance_targets() {
  // limits of n Var(xi_n) for the Gaussian rotation model on the study grid
  return {{0.0, 0.40}, {0.3, 0.46}, {0.5, 0.51}, {0.7, 0.47}, {0.9, 0.24}};
}

void validate(const SimulationConfig& config) {
  if (config.rho_grid.empty()) throw parameter_error("simulation config: rho_grid is empty");
  for (double rho : config.rho_grid) {
    if (!(std::fabs(rho) < 1.0)) {
      throw parameter_error("simulation config: rho_grid entries must lie in (-1, 1)");
    }
    if (config.variance_targets.find(rho) == config.variance_targets.end()) {
      throw parameter_error("simulation config: variance_targets has no entry for rho=" +
                            std::to_string(rho));
    }
  }
  if (config.n_grid.empty()) throw parameter_error("simulation config: n_grid is empty");
  for (auto n : config.n_grid) {
    if (n < 2) throw parameter_error("simulation config: n_grid entries must be at least 2");
  }
  if (config.replications < 2) {
    throw parameter_error("simulation config: replications must be at least 2");
  }
  if (config.bootstrap_size < 2) {
    throw parameter_error("simulation config: bootstrap_size must be at least 2");
  }
  if (config.alphas.empty()) throw parameter_error("simulation config: alphas is empty");
  for (double a : config.alphas) {
    if (!(a > 0.0 && a < 1.0)) {
      throw parameter_error("simulation config: alphas must lie in (0, 1)");
    }
  }
  if (config.workers < 0) throw parameter_error("simulation config: workers must be >= 0");
}

namespace {

struct RepRecord {
  double v1 = 0.0;
  double v2 = 0.0;
  double mean_xib = 0.0;
  std::int64_t degenerate_redraws = 0;
  // covers[method][alpha-index]
  std::vector<std::uint8_t> covers_hb1, covers_hb2, covers_oracle;
};

RepRecord run_replication(double rho, std::int64_t n, const SimulationConfig& config,
                          double true_xi, double variance_target, RngStream rep_stream) {
  const auto draw = gaussian_rotation_sample(rho, n, rep_stream.derive(0));
  const BootstrapDistribution dist = bootstrap_distribution(
      draw.sample, config.bootstrap_size, rep_stream.derive(1), BootStatistic::hat);

  RepRecord rec;
  rec.v1 = var_b1(dist);
  rec.v2 = var_b2(dist);
  rec.mean_xib =
      std::accumulate(dist.values.begin(), dist.values.end(), 0.0) / dist.values.size();
  rec.degenerate_redraws = dist.degenerate_redraws;
  for (double alpha : config.alphas) {
    const auto covered = [&](const ConfidenceInterval& ci) {
      return static_cast<std::uint8_t>(ci.lower <= true_xi && true_xi <= ci.upper);
    };
    rec.covers_hb1.push_back(covered(ci_hybrid1(dist, alpha)));
    rec.covers_hb2.push_back(covered(ci_hybrid2(dist, alpha)));
    rec.covers_oracle.push_back(covered(ci_oracle_var(dist.source_xi, n, variance_target, alpha)));
  }
  return rec;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double se_of_mean(const std::vector<double>& v) {
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  const auto n = static_cast<double>(v.size());
  return std::sqrt(acc / (n - 1.0) / n);
}

// rmse = sqrt(mean (est - target)^2); delta-method standard error
void rmse_with_se(const std::vector<double>& est, double target, double& rmse, double& se) {
  std::vector<double> sq(est.size());
  for (std::size_t i = 0; i < est.size(); ++i) {
    sq[i] = (est[i] - target) * (est[i] - target);
  }
  const double mean_sq = mean_of(sq);
  rmse = std::sqrt(mean_sq);
  se = rmse > 0.0 ? se_of_mean(sq) / (2.0 * rmse) : 0.0;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

const char* method_name(CiMethod m) {
  switch (m) {
    case CiMethod::hb1: return "HB1";
    case CiMethod::hb2: return "HB2";
    case CiMethod::oracle_var: return "OracleVar";
  }
  return "?";
}

}  // namespace

SimulationResult run_simulation(const SimulationConfig& config, std::ostream* progress) {
  validate(config);

  SimulationResult result;
  result.config = config;

  const int workers = config.workers > 0
                          ? config.workers
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const RngStream master(config.master_seed);

  for (std::size_t rho_idx = 0; rho_idx < config.rho_grid.size(); ++rho_idx) {
    const double rho = config.rho_grid[rho_idx];
    // abort before simulating if the population value is unavailable
    const double true_xi = true_xi_oracle(rho).value;
    const double target = config.variance_targets.at(rho);

    for (std::size_t n_idx = 0; n_idx < config.n_grid.size(); ++n_idx) {
      const std::int64_t n = config.n_grid[n_idx];
      const auto started = std::chrono::steady_clock::now();

      const std::int64_t reps = config.replications;
      std::vector<RepRecord> records(reps);
      const RngStream cell_stream = master.derive(rho_idx).derive(n_idx);

      std::atomic<std::int64_t> next{0};
      const auto worker = [&] {
        for (;;) {
          const std::int64_t rep = next.fetch_add(1);
          if (rep >= reps) break;
          records[rep] = run_replication(rho, n, config, true_xi, target,
                                         cell_stream.derive(static_cast<std::uint64_t>(rep)));
        }
      };
      std::vector<std::thread> pool;
      for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();

      SimulationCell cell;
      cell.rho = rho;
      cell.n = n;
      cell.true_xi = true_xi;
      cell.variance_target = target;

      std::vector<double> v1(reps), v2(reps), means(reps);
      for (std::int64_t rep = 0; rep < reps; ++rep) {
        v1[rep] = records[rep].v1;
        v2[rep] = records[rep].v2;
        means[rep] = records[rep].mean_xib;
        cell.degenerate_redraws += records[rep].degenerate_redraws;
      }
      rmse_with_se(v1, target, cell.rmse_b1, cell.rmse_b1_se);
      rmse_with_se(v2, target, cell.rmse_b2, cell.rmse_b2_se);
      cell.mean_xib = mean_of(means);
      cell.mean_xib_se = se_of_mean(means);
      cell.mean_var_b2 = mean_of(v2);
      cell.mean_var_b2_se = se_of_mean(v2);

      for (std::size_t a = 0; a < config.alphas.size(); ++a) {
        const auto coverage_of = [&](auto member) {
          double acc = 0.0;
          for (const auto& rec : records) acc += (rec.*member)[a];
          const double rate = acc / static_cast<double>(reps);
          const double se = std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps));
          return std::pair<double, double>(rate, se);
        };
        const auto [r1, s1] = coverage_of(&RepRecord::covers_hb1);
        cell.coverage.push_back({CiMethod::hb1, config.alphas[a], r1, s1});
        const auto [r2, s2] = coverage_of(&RepRecord::covers_hb2);
        cell.coverage.push_back({CiMethod::hb2, config.alphas[a], r2, s2});
        const auto [r3, s3] = coverage_of(&RepRecord::covers_oracle);
        cell.coverage.push_back({CiMethod::oracle_var, config.alphas[a], r3, s3});
      }

      cell.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      if (progress) {
        *progress << "cell rho=" << rho << " n=" << n << " done in " << cell.wall_seconds
                  << " s\n";
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

std::string to_csv(const SimulationResult& result) {
  std::ostringstream out;
  out << "rho,n,method,metric,alpha,value,stderr,replications,bootstrap_size,seed\n";
  const auto row = [&](const SimulationCell& cell, const char* method, const char* metric,
                       const std::string& alpha, double value, const std::string& se) {
    out << fmt_double(cell.rho) << ',' << cell.n << ',' << method << ',' << metric << ',' << alpha
        << ',' << fmt_double(value) << ',' << se << ',' << result.config.replications << ','
        << result.config.bootstrap_size << ',' << result.config.master_seed << '\n';
  };
  for (const auto& cell : result.cells) {
    row(cell, "V-B1", "rmse", "", cell.rmse_b1, fmt_double(cell.rmse_b1_se));
    row(cell, "V-B2", "rmse", "", cell.rmse_b2, fmt_double(cell.rmse_b2_se));
    row(cell, "V-B2", "mean", "", cell.mean_var_b2, fmt_double(cell.mean_var_b2_se));
    row(cell, "XI-B", "mean", "", cell.mean_xib, fmt_double(cell.mean_xib_se));
    row(cell, "XI-B", "degenerate_redraws", "", static_cast<double>(cell.degenerate_redraws), "");
    row(cell, "Oracle", "true_xi", "", cell.true_xi, "");
    row(cell, "Oracle", "variance_target", "", cell.variance_target, "");
    for (const auto& cov : cell.coverage) {
      row(cell, method_name(cov.method), "coverage", fmt_double(cov.alpha), cov.rate,
          fmt_double(cov.se));
    }
  }
  return out.str();
}

std::string to_json(const SimulationResult& result) {
  nlohmann::json root;
  root["schema_version"] = 1;
  nlohmann::json cfg;
  cfg["rho_grid"] = result.config.rho_grid;
  cfg["n_grid"] = result.config.n_grid;
  cfg["replications"] = result.config.replications;
  cfg["bootstrap_size"] = result.config.bootstrap_size;
  cfg["alphas"] = result.config.alphas;
  cfg["master_seed"] = result.config.master_seed;
  nlohmann::json targets = nlohmann::json::object();
  for (const auto& [rho, target] : result.config.variance_targets) {
    targets[fmt_double(rho)] = target;
  }
  cfg["variance_targets"] = targets;
  root["config"] = cfg;

  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    nlohmann::json c;
    c["rho"] = cell.rho;
    c["n"] = cell.n;
    c["true_xi"] = cell.true_xi;
    c["variance_target"] = cell.variance_target;
    c["rmse_b1"] = cell.rmse_b1;
    c["rmse_b1_se"] = cell.rmse_b1_se;
    c["rmse_b2"] = cell.rmse_b2;
    c["rmse_b2_se"] = cell.rmse_b2_se;
    c["mean_xib"] = cell.mean_xib;
    c["mean_xib_se"] = cell.mean_xib_se;
    c["mean_var_b2"] = cell.mean_var_b2;
    c["mean_var_b2_se"] = cell.mean_var_b2_se;
    c["degenerate_redraws"] = cell.degenerate_redraws;
    nlohmann::json cov = nlohmann::json::array();
    for (const auto& entry : cell.coverage) {
      cov.push_back({{"method", method_name(entry.method)},
                     {"alpha", entry.alpha},
                     {"rate", entry.rate},
                     {"se", entry.se}});
    }
    c["coverage"] = cov;
    cells.push_back(std::move(c));
  }
  root["results"] = std::move(cells);
  return root.dump(2) + "\n";
}

}  // namespace xiboot
