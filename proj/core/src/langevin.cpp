#include "irf/langevin.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "irf/errors.hpp"

namespace irf {

double default_langevin_step(int dim) { return 1.0 / (static_cast<double>(dim) * dim); }

Eigen::VectorXd projected_langevin_step(const Potential& p, const DomainSet& domain, const Eigen::VectorXd& x,
                                        double step_size, const Eigen::VectorXd& noise) {
  if (!(step_size > 0)) throw std::invalid_argument("projected_langevin_step: step size must be positive");
  const Eigen::VectorXd proposal = x - step_size * p.gradient_unchecked(x) + std::sqrt(2.0 * step_size) * noise;
  return domain.project(proposal);
}

Eigen::VectorXd projected_langevin_step(const Potential& p, const DomainSet& domain, const Eigen::VectorXd& x,
                                        double step_size, Rng& rng) {
  Eigen::VectorXd noise(x.size());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = rng.normal();
  return projected_langevin_step(p, domain, x, step_size, noise);
}

SampleBatch run_langevin(const Potential& p, const LangevinConfig& cfg, const Eigen::VectorXd& x0) {
  if (!p.domain().contains(x0)) throw DomainError("run_langevin: starting point outside the domain");
  const double eta = cfg.step_size > 0 ? cfg.step_size : default_langevin_step(p.dim());
  const auto start = std::chrono::steady_clock::now();
  SampleBatch batch;
  batch.positions.resize(static_cast<Eigen::Index>(cfg.steps), p.dim());
  batch.meta = {cfg.seed, cfg.target_name, "langevin", 0.0};
  Rng rng(cfg.seed);
  Eigen::VectorXd x = x0;
  for (std::uint64_t i = 0; i < cfg.steps; ++i) {
    x = projected_langevin_step(p, p.domain(), x, eta, rng);
    batch.positions.row(static_cast<Eigen::Index>(i)) = x.transpose();
  }
  batch.meta.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return batch;
}

}  // namespace irf
