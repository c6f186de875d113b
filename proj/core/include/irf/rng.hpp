#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace irf {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Per-chain pseudo-random stream. One Rng is owned by exactly one chain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(mix_seed(seed, 0)) {}

  /// Child stream `stream` of this seed; independent of the parent sequence.
  [[nodiscard]] Rng split(std::uint64_t stream) const { return Rng(mix_seed(seed_, stream + 1)); }

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  double normal();
  /// +1 or -1 with probability 1/2 each.
  int sign();
  /// Standard Laplace(0, 1).
  double laplace();

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Uniform direction on the unit sphere S^{d-1}. For d == 1 returns +-1.
Eigen::VectorXd sample_unit_sphere(Rng& rng, int dim);

}  // namespace irf
