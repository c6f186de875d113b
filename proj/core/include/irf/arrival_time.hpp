#pragma once

#include <cstddef>
#include <vector>

#include "irf/potential.hpp"

namespace irf {

/// Breakpoints t_0 < t_1 < ... < t_k of a line section where the slope changes
/// sign, with the sign of the slope on each of the k open segments
/// (+1 ascending, -1 descending, 0 flat).
struct MonotoneSegmentation {
  std::vector<double> breakpoints;
  std::vector<int> signs;
  /// Set when a segment failed the 32-probe sign validation even after refinement.
  bool resolution_warning = false;

  [[nodiscard]] std::size_t segments() const noexcept { return signs.size(); }
  [[nodiscard]] double begin() const { return breakpoints.front(); }
  [[nodiscard]] double end() const { return breakpoints.back(); }
};

struct ArrivalResult {
  double tau = 0.0;
  /// Integrated rate consumed up to tau.
  double mass = 0.0;
  /// True when the ray hit the domain wall before the rate reached the threshold.
  bool clamped = false;
};

/// Sign-change scan of the slope over [begin, end] (64 probes per bracket,
/// bisection on the sign to ~1e-12 relative width).
MonotoneSegmentation find_segmentation(const LineSection& line, double begin, double end);

inline MonotoneSegmentation find_segmentation(const LineSection& line, double search_limit) {
  return find_segmentation(line, 0.0, search_limit);
}

/// Integrated positive-part rate Lambda(t) = int_0^t (slope)_+ ds, computed as
/// the sum of potential increments over ascending segments.
double integrated_rate(const LineSection& line, const MonotoneSegmentation& seg, double t);

/// Convenience overload that segments [0, t] first.
double integrated_rate(const LineSection& line, double t);

/// Smallest t >= 0 with Lambda(t) >= threshold (threshold = -log V).
///
/// Bounded rays whose total rate stays below the threshold are clamped at
/// t_max. Unbounded rays expand the bracket [0, 1] by doubling, at most 60
/// times, before throwing DivergenceError.
ArrivalResult solve_arrival(const LineSection& line, double threshold);

namespace detail {

/// Smallest t in [lo, hi] with f(t) >= target for nondecreasing f, to
/// absolute width 1e-12 (1 + |hi|). Returns hi when f(hi) < target.
double bisect_increasing(const ScalarFn& f, double lo, double hi, double target);

/// Boundary between {pred false} and {pred true} (or vice versa) on [lo, hi].
double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi);

}  // namespace detail

}  // namespace irf
