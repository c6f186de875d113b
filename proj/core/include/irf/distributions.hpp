#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irf/decomposition.hpp"
#include "irf/potential.hpp"

namespace irf {

/// Closed-form arrival time tau(x, v, V) for 1-D targets where one is known.
using TauRule = std::function<double(double x, int direction, double v_uniform)>;

/// A named target with the pieces needed to sample it and to check samples.
struct TargetSpec {
  std::string name;
  Potential potential;
  std::optional<MonotoneDecomposition> decomposition;
  /// Reference CDF of the target (1-D) or of every coordinate marginal.
  ScalarFn cdf;
  /// Normalized density (1-D targets only).
  ScalarFn density;
  TauRule analytic_tau;
  /// Interval carrying the mass used by quadrature checks (clipped to
  /// +-8 standard deviations for unbounded targets).
  double support_lower = 0.0;
  double support_upper = 0.0;

  [[nodiscard]] int dim() const { return potential.dim(); }
};

TargetSpec make_uniform(double a, double b);
TargetSpec make_gaussian(double mean, double variance);
TargetSpec make_standard_gaussian(int dim);
TargetSpec make_beta(double alpha, double beta);
/// w1 N(mu1, variance) + (1 - w1) N(mu2, variance) with mu1 < mu2.
TargetSpec make_mixture(double w1, double mu1, double mu2, double variance);
TargetSpec make_truncated_gaussian(double mean, double variance, double lo, double hi);

/// Registry lookup by name: "uniform:a:b", "gaussian:mu:var", "mvn:d",
/// "beta:alpha:beta", "mixture:w1:mu1:mu2:var", "truncnorm:mu:var:lo:hi".
/// Throws std::invalid_argument for unknown names or bad parameters.
TargetSpec make_target(std::string_view spec);

/// The named zoo covered by `irf check --all`.
std::vector<std::string> zoo_names();

enum class BetaRegime { Convex, Concave, Increasing, Decreasing };
BetaRegime beta_regime(double alpha, double beta);

/// Per-regime arrival time for Beta(alpha, beta) using the closed-form case
/// analysis (mode location, clamping at the walls, line search on U).
double beta_tau_regime(double alpha, double beta, double x, int direction, double v_uniform);

/// U and U' of a 1-D potential as scalar functions (unchecked evaluation).
ScalarFn scalar_value(const Potential& p);
ScalarFn scalar_slope(const Potential& p);

}  // namespace irf
