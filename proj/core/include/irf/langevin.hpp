#pragma once

#include <cstdint>
#include <string>

#include "irf/chain.hpp"
#include "irf/potential.hpp"

namespace irf {

/// Projected (unadjusted) Langevin baseline.
struct LangevinConfig {
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  /// Step size; non-positive selects 1 / dim^2.
  double step_size = 0.0;
  std::string target_name;
};

double default_langevin_step(int dim);

/// Proj_D(x - eta grad U(x) + sqrt(2 eta) xi) with a supplied noise vector.
Eigen::VectorXd projected_langevin_step(const Potential& p, const DomainSet& domain, const Eigen::VectorXd& x,
                                        double step_size, const Eigen::VectorXd& noise);

Eigen::VectorXd projected_langevin_step(const Potential& p, const DomainSet& domain, const Eigen::VectorXd& x,
                                        double step_size, Rng& rng);

SampleBatch run_langevin(const Potential& p, const LangevinConfig& cfg, const Eigen::VectorXd& x0);

}  // namespace irf
