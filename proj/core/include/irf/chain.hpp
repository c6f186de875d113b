#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "irf/rng.hpp"

namespace irf {

/// Current position of one chain plus the randomness that drives it.
struct ChainState {
  Eigen::VectorXd position;
  Rng rng;
  std::uint64_t step_count = 0;
  /// Line held across steps when axis_hold > 1 (empty until the first draw).
  Eigen::VectorXd held_direction;
  std::uint64_t hold_remaining = 0;

  ChainState(Eigen::VectorXd x0, std::uint64_t seed) : position(std::move(x0)), rng(seed) {}
};

struct BatchMeta {
  std::uint64_t seed = 0;
  std::string target;
  std::string sampler;
  double wall_seconds = 0.0;
};

/// Collected chain positions, one row per kept step.
struct SampleBatch {
  Eigen::MatrixXd positions;
  BatchMeta meta;

  [[nodiscard]] Eigen::Index rows() const noexcept { return positions.rows(); }
  [[nodiscard]] Eigen::Index dim() const noexcept { return positions.cols(); }
  [[nodiscard]] Eigen::VectorXd column(Eigen::Index j) const { return positions.col(j); }
};

}  // namespace irf
