#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "irf/arrival_time.hpp"
#include "irf/chain.hpp"
#include "irf/potential.hpp"

namespace irf {

struct SamplerConfig {
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  /// Consecutive steps sharing one line; only the sign of the direction is
  /// redrawn within a hold. Fixed up front, independent of the chain.
  std::uint64_t axis_hold = 1;
  /// Leading steps run but not recorded.
  std::uint64_t burn_in = 0;
  std::string target_name;
};

/// Arrival time along `line` for uniform draw `v_uniform`: the convex
/// (truncated) procedure for log-concave potentials, the segmented solver otherwise.
ArrivalResult arrival_for(const Potential& p, const LineSection& line, double v_uniform);

/// f_{V,v}(x) = x + tau(V, v, x) v / 2.
Eigen::VectorXd transition(const Potential& p, const Eigen::VectorXd& x, double v_uniform,
                           const Eigen::VectorXd& direction);

/// One update of the chain: draw (V, v), solve tau, move half of it.
void step(const Potential& p, ChainState& state, std::uint64_t axis_hold = 1);

/// Domain center for bounded domains; otherwise up to 200 adaptive
/// gradient-descent steps from an interior point.
Eigen::VectorXd default_start(const Potential& p);

SampleBatch run(const Potential& p, const SamplerConfig& cfg, const Eigen::VectorXd& x0);

/// Values of f_{V,v}(x) for a 1-D target over a grid of V: column 0 is
/// v = -1, column 1 is v = +1.
Eigen::MatrixXd transition_function_surface(const Potential& p, double x, std::span<const double> v_grid);

}  // namespace irf
