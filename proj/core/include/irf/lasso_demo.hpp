#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irf/selective.hpp"

namespace irf::selective {

struct LassoDemoConfig {
  int n = 100;
  int p = 40;
  double rho = 0.3;
  double lasso_penalty = 1.4;
  RandomizationKind randomization = RandomizationKind::Gaussian;
  int reps = 100;
  std::uint64_t steps = 1000;
  std::uint64_t langevin_steps = 3000;
  double langevin_step = 0.0;  ///< <= 0 selects 1 / dim^2
  double level = 0.9;
  std::uint64_t seed = 0;
  int threads = 0;             ///< <= 0 reads IRF_THREADS, else hardware concurrency
};

struct ReplicateResult {
  int replicate = 0;
  std::uint64_t seed = 0;
  std::vector<int> active;
  std::vector<CoordinateInference> irf;
  std::vector<CoordinateInference> langevin;
  std::vector<CoordinateInference> naive;
  double irf_seconds = 0.0;
  double langevin_seconds = 0.0;
};

struct MethodSummary {
  std::string method;
  int intervals = 0;
  double coverage_percent = 0.0;  ///< share of intervals covering 0
  double pvalue_ks = 0.0;         ///< KS distance of pooled p-values to Uniform(0,1)
  double seconds = 0.0;           ///< summed sampler wall time
  int unreliable = 0;             ///< coordinates whose weight ESS fell below the floor
};

struct LassoDemoReport {
  std::vector<ReplicateResult> replicates;
  std::vector<MethodSummary> summary;  ///< IRF, Langevin, naive
};

/// One global-null replicate; every random stream derives from `seed`.
ReplicateResult run_replicate(const LassoDemoConfig& cfg, int replicate, std::uint64_t seed);

/// Replicates fan out over worker threads; results do not depend on the thread count.
LassoDemoReport run_lasso_demo(const LassoDemoConfig& cfg);

/// Worker count: explicit value, else IRF_THREADS, else hardware concurrency.
int resolve_threads(int requested);

}  // namespace irf::selective
