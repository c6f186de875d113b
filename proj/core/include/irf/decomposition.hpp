#pragma once

#include "irf/chain.hpp"
#include "irf/hit_and_run.hpp"
#include "irf/potential.hpp"
#include "irf/rng.hpp"

namespace irf {

/// One monotone piece of a split potential. `inverse` and `derivative` are
/// optional closed forms; empty functions fall back to bisection and central
/// differences (h = 1e-7).
struct MonotonePiece {
  ScalarFn f;
  ScalarFn inverse;
  ScalarFn derivative;
};

struct InversionResult {
  double x;
  bool clamped;  ///< y was outside [min f, max f] on the bracket
};

/// Solve f(x) = y for monotone f on [lo, hi] by bisection (<= 200 iterations).
/// Out-of-range y returns the endpoint where f is nearest, flagged as clamped.
/// For increasing f the smallest root is returned, for decreasing f the largest.
InversionResult invert_monotone(const ScalarFn& f, double y, double lo, double hi);

/// U = U1 + U2 on an interval with U1 nondecreasing and U2 nonincreasing.
class MonotoneDecomposition {
 public:
  MonotoneDecomposition(MonotonePiece increasing, MonotonePiece decreasing, double lower, double upper);

  [[nodiscard]] double lower() const noexcept { return lower_; }
  [[nodiscard]] double upper() const noexcept { return upper_; }

  [[nodiscard]] double u1(double x) const { return inc_.f(x); }
  [[nodiscard]] double u2(double x) const { return dec_.f(x); }
  [[nodiscard]] double u(double x) const { return inc_.f(x) + dec_.f(x); }
  [[nodiscard]] double du1(double x) const;
  [[nodiscard]] double du2(double x) const;

  /// Evaluation limits pulled 1e-12 inside finite walls.
  [[nodiscard]] double lower_eval() const noexcept { return lower_eval_; }
  [[nodiscard]] double upper_eval() const noexcept { return upper_eval_; }

  struct Move {
    double tau;
    bool clamped;  ///< tau set to the distance to the wall
  };

  /// tau for direction +1 (via U1) or -1 (via U2) with threshold -log V:
  /// min{t >= 0 : U1(x + t) >= U1(x) - log V}, mirrored for U2.
  [[nodiscard]] Move arrival(double x, int direction, double threshold) const;

  /// Probability of the clamped move in `direction` (the atom at the midpoint
  /// between x and the wall), including the 1/2 for the direction draw.
  [[nodiscard]] double clamp_mass(double x, int direction) const;

 private:
  MonotonePiece inc_;
  MonotonePiece dec_;
  double lower_;
  double upper_;
  double lower_eval_;
  double upper_eval_;
};

/// x + tau/2 (direction +1) or x - tau/2 (direction -1).
double decomposed_transition(const MonotoneDecomposition& dec, double x, double v_uniform, int direction);

double step_decomposed(const MonotoneDecomposition& dec, double x, Rng& rng);

/// Chain of decomposition-sampler updates; axis_hold does not apply in 1-D.
SampleBatch run_decomposed(const MonotoneDecomposition& dec, const SamplerConfig& cfg, double x0);

/// Density part of the one-step kernel at y != x. Throws std::domain_error at y == x.
double kernel_density_decomposed(const MonotoneDecomposition& dec, double x, double y);

}  // namespace irf
