#include "irf/decomposition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irf/errors.hpp"

namespace irf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDiffStep = 1e-7;
constexpr int kMaxDoublings = 60;

double inset(double bound, int side) {
  if (!std::isfinite(bound)) return bound;
  return bound + side * 1e-12 * std::max(1.0, std::abs(bound));
}

double central_difference(const ScalarFn& f, double x) {
  return (f(x + kDiffStep) - f(x - kDiffStep)) / (2.0 * kDiffStep);
}

}  // namespace

InversionResult invert_monotone(const ScalarFn& f, double y, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("invert_monotone: empty bracket");
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  const bool increasing = f_lo <= f_hi;
  const double f_min = increasing ? f_lo : f_hi;
  const double f_max = increasing ? f_hi : f_lo;
  if (y < f_min) return {increasing ? lo : hi, true};
  if (y > f_max) return {increasing ? hi : lo, true};

  // Keep `a` on the side with f < y and `b` on the side with f >= y.
  double a = increasing ? lo : hi;
  double b = increasing ? hi : lo;
  if (f(a) >= y) return {a, false};
  const double tol = 1e-10 * (1.0 + std::abs(y));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    const double fm = f(mid);
    if (fm >= y) {
      b = mid;
      if (fm - y <= tol) break;
    } else {
      a = mid;
    }
  }
  return {b, false};
}

MonotoneDecomposition::MonotoneDecomposition(MonotonePiece increasing, MonotonePiece decreasing,
                                             double lower, double upper)
    : inc_(std::move(increasing)),
      dec_(std::move(decreasing)),
      lower_(lower),
      upper_(upper),
      lower_eval_(inset(lower, +1)),
      upper_eval_(inset(upper, -1)) {
  if (!inc_.f || !dec_.f) throw std::invalid_argument("MonotoneDecomposition: both pieces are required");
  if (!(lower < upper)) throw std::invalid_argument("MonotoneDecomposition: empty domain");
}

double MonotoneDecomposition::du1(double x) const {
  return inc_.derivative ? inc_.derivative(x) : central_difference(inc_.f, x);
}

double MonotoneDecomposition::du2(double x) const {
  return dec_.derivative ? dec_.derivative(x) : central_difference(dec_.f, x);
}

MonotoneDecomposition::Move MonotoneDecomposition::arrival(double x, int direction, double threshold) const {
  if (!(x > lower_ && x < upper_)) throw DomainError("decomposed arrival: x outside the domain");
  if (!(threshold >= 0)) throw std::invalid_argument("decomposed arrival: threshold must be >= 0");
  if (direction != 1 && direction != -1) throw std::invalid_argument("decomposed arrival: direction must be +-1");
  if (threshold == 0) return {0.0, false};

  const MonotonePiece& piece = direction > 0 ? inc_ : dec_;
  const double wall = direction > 0 ? upper_ : lower_;
  const double wall_eval = direction > 0 ? upper_eval_ : lower_eval_;
  const double target = piece.f(x) + threshold;
  const double wall_distance = std::abs(wall - x);

  if (piece.inverse) {
    const double z = piece.inverse(target);
    const bool beyond = direction > 0 ? !(z < wall) : !(z > wall);
    if (std::isnan(z) || beyond) return {wall_distance, true};
    return {std::max(0.0, direction * (z - x)), false};
  }

  double far = wall_eval;
  if (!std::isfinite(far)) {
    double step = 1.0;
    int doublings = 0;
    while (piece.f(x + direction * step) < target) {
      step *= 2.0;
      if (++doublings > kMaxDoublings) {
        throw DivergenceError("decomposed arrival: monotone piece never reaches the threshold");
      }
    }
    far = x + direction * step;
  } else if (piece.f(far) < target) {
    return {wall_distance, true};
  }
  const auto [z, clamped] = direction > 0 ? invert_monotone(piece.f, target, x, far)
                                          : invert_monotone(piece.f, target, far, x);
  if (clamped) return {wall_distance, true};
  return {std::max(0.0, direction * (z - x)), false};
}

double MonotoneDecomposition::clamp_mass(double x, int direction) const {
  const double wall_eval = direction > 0 ? upper_eval_ : lower_eval_;
  if (!std::isfinite(wall_eval)) return 0.0;
  const MonotonePiece& piece = direction > 0 ? inc_ : dec_;
  const double rise = piece.f(wall_eval) - piece.f(x);
  if (!std::isfinite(rise)) return rise > 0 ? 0.0 : 0.5;
  return 0.5 * std::exp(-std::max(0.0, rise));
}

double decomposed_transition(const MonotoneDecomposition& dec, double x, double v_uniform, int direction) {
  if (!(v_uniform > 0.0 && v_uniform <= 1.0)) {
    throw std::invalid_argument("decomposed_transition: V must lie in (0, 1]");
  }
  const auto move = dec.arrival(x, direction, -std::log(v_uniform));
  return x + direction * 0.5 * move.tau;
}

double step_decomposed(const MonotoneDecomposition& dec, double x, Rng& rng) {
  const int direction = rng.uniform_open() < 0.5 ? -1 : 1;
  return decomposed_transition(dec, x, rng.uniform_open(), direction);
}

SampleBatch run_decomposed(const MonotoneDecomposition& dec, const SamplerConfig& cfg, double x0) {
  if (!(x0 > dec.lower() && x0 < dec.upper())) throw DomainError("run_decomposed: starting point outside the domain");
  const auto start = std::chrono::steady_clock::now();
  SampleBatch batch;
  batch.positions.resize(static_cast<Eigen::Index>(cfg.steps), 1);
  batch.meta = {cfg.seed, cfg.target_name, "decomposed", 0.0};
  Rng rng(cfg.seed);
  double x = x0;
  for (std::uint64_t i = 0; i < cfg.burn_in; ++i) x = step_decomposed(dec, x, rng);
  for (std::uint64_t i = 0; i < cfg.steps; ++i) {
    x = step_decomposed(dec, x, rng);
    batch.positions(static_cast<Eigen::Index>(i), 0) = x;
  }
  batch.meta.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return batch;
}

double kernel_density_decomposed(const MonotoneDecomposition& dec, double x, double y) {
  if (y == x) throw std::domain_error("kernel_density_decomposed: density undefined on the diagonal");
  const double z = 2.0 * y - x;
  if (!(z > dec.lower_eval() && z < dec.upper_eval())) return 0.0;
  if (y > x) {
    return std::max(0.0, dec.du1(z)) * std::exp(-(dec.u1(z) - dec.u1(x)));
  }
  return std::max(0.0, -dec.du2(z)) * std::exp(-(dec.u2(z) - dec.u2(x)));
}

}  // namespace irf
