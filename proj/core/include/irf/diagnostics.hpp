#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "irf/decomposition.hpp"
#include "irf/distributions.hpp"

namespace irf {

/// sup_x |ECDF(x) - cdf(x)|. Throws std::invalid_argument for empty input.
double ks_distance(std::span<const double> samples, const ScalarFn& cdf);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Histogram {
  double lower;
  double upper;
  std::vector<std::size_t> counts;
  std::size_t outside = 0;

  [[nodiscard]] double bin_width() const { return (upper - lower) / static_cast<double>(counts.size()); }
  [[nodiscard]] double bin_center(std::size_t i) const { return lower + (static_cast<double>(i) + 0.5) * bin_width(); }
};

Histogram histogram(std::span<const double> samples, std::size_t bins, double lower, double upper);

/// Right-continuous empirical CDF.
class Ecdf {
 public:
  explicit Ecdf(std::span<const double> samples);
  double operator()(double x) const;
  [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }
  [[nodiscard]] const std::vector<double>& sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// Effective sample size from Geyer's initial positive sequence of
/// autocorrelation pair sums.
double effective_sample_size(std::span<const double> samples);

enum class KernelVariant {
  Exact,
  /// Negative control: the main kernel without the positive part on the rate,
  /// the decomposed kernel without the U1(x) / U2(x) normalization; both drop
  /// the wall atoms so that flat potentials fail as well.
  NegativeControl,
};

struct StationarityReport {
  double max_residual = 0.0;
  /// The residual changed by more than 1e-4 when the grid was halved,
  /// i.e. quadrature error may dominate.
  bool coarse_grid = false;
};

/// One-step kernel of the main 1-D sampler at y != x (density part).
double main_kernel_density(const TargetSpec& target, double x, double y,
                           KernelVariant variant = KernelVariant::Exact);

/// Probability that a move from x in `direction` is clamped at the wall,
/// including the 1/2 for the direction draw. Zero on unbounded sides.
double main_kernel_clamp_mass(const TargetSpec& target, double x, int direction);

/// max_y |int pi(x) K(x, y) dx - pi(y)| for the main kernel, trapezoid rule
/// with `grid_points` nodes split at y, wall atoms included.
StationarityReport stationarity_residual_main(const TargetSpec& target, std::size_t grid_points,
                                              std::span<const double> test_points,
                                              KernelVariant variant = KernelVariant::Exact);

/// Same check for the decomposition kernel; `density` must be normalized.
StationarityReport stationarity_residual_decomposed(const MonotoneDecomposition& dec, const ScalarFn& density,
                                                    double lower, double upper, std::size_t grid_points,
                                                    std::span<const double> test_points,
                                                    KernelVariant variant = KernelVariant::Exact);

/// `count` evenly spaced interior points of (lower, upper), endpoints excluded.
std::vector<double> interior_test_points(double lower, double upper, std::size_t count = 21);

}  // namespace irf
