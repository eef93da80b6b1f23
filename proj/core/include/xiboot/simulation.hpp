#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "xiboot/bootstrap.hpp"

namespace xiboot {

// Defaults reproduce one desk-scale pass over the coverage study grid.
std::map<double, double> default_variance_targets();

struct SimulationConfig {
  std::vector<double> rho_grid{0.0, 0.3, 0.5, 0.7, 0.9};
  std::vector<std::int64_t> n_grid{1000};
  std::int64_t replications = 500;
  std::int64_t bootstrap_size = 500;
  std::vector<double> alphas{0.05, 0.1};
  std::uint64_t master_seed = 1;
  // rho -> limit of n Var(xi_n) used both as RMSE target and as the variance
  // behind the oracle-variance interval.
  std::map<double, double> variance_targets = default_variance_targets();
  int workers = 0;  // 0 = hardware concurrency
};

// Throws parameter_error naming the offending field.
void validate(const SimulationConfig& config);

struct CoverageStat {
  CiMethod method = CiMethod::hb1;
  double alpha = 0.0;
  double rate = 0.0;
  double se = 0.0;
};

// Aggregates for one (rho, n) grid cell.
struct SimulationCell {
  double rho = 0.0;
  std::int64_t n = 0;
  double true_xi = 0.0;          // population value used for coverage
  double variance_target = 0.0;  // RMSE target for the variance estimators
  double rmse_b1 = 0.0, rmse_b1_se = 0.0;
  double rmse_b2 = 0.0, rmse_b2_se = 0.0;
  std::vector<CoverageStat> coverage;
  double mean_xib = 0.0, mean_xib_se = 0.0;
  double mean_var_b2 = 0.0, mean_var_b2_se = 0.0;
  std::int64_t degenerate_redraws = 0;
  double wall_seconds = 0.0;  // reported on the progress stream, not serialized
};

struct SimulationResult {
  SimulationConfig config;
  std::vector<SimulationCell> cells;
};

// Per cell: R fresh samples; per sample the statistic, a B-replicate bootstrap
// distribution, both variance estimators, hybrid intervals per alpha and the
// oracle-variance interval.  Replications run concurrently up to
// config.workers, each on the stream (master_seed, rho-index, n-index,
// replication-index); aggregation is a fixed-order reduction, so the result is
// identical for any worker count.
SimulationResult run_simulation(const SimulationConfig& config, std::ostream* progress = nullptr);

// Long-format table: rho,n,method,metric,alpha,value,stderr,replications,
// bootstrap_size,seed.  Deterministic formatting.
std::string to_csv(const SimulationResult& result);
// Mirrors the result structure, with a schema_version field.
std::string to_json(const SimulationResult& result);

}  // namespace xiboot
