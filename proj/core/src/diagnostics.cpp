#include "irf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "irf/arrival_time.hpp"

namespace irf {

namespace {

std::vector<double> sorted_copy(std::span<const double> xs) {
  std::vector<double> out(xs.begin(), xs.end());
  std::sort(out.begin(), out.end());
  return out;
}

double inset(double bound, int side) {
  if (!std::isfinite(bound)) return bound;
  return bound + side * 1e-12 * std::max(1.0, std::abs(bound));
}

// Trapezoid in u after x = a + (b - a)(1 - cos(pi u)) / 2. The Jacobian vanishes at
// both ends, so integrable endpoint singularities and jumps at a or b are harmless
// and f is never evaluated at a or b.
double cosine_trapezoid(const std::function<double(double)>& f, double a, double b, std::size_t nodes) {
  if (!(b > a) || nodes < 3) return 0.0;
  const double h = 1.0 / static_cast<double>(nodes - 1);
  const double half_width = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < nodes; ++i) {
    const double u = std::numbers::pi * h * static_cast<double>(i);
    const double x = a + half_width * (1.0 - std::cos(u));
    if (!(x > a && x < b)) continue;
    sum += f(x) * std::sin(u);
  }
  return sum * half_width * std::numbers::pi * h;
}

// Density part + wall atoms landing at y, integrated against pi. The kernel jumps
// at x = y and where the landing point 2y - x meets a wall, so the range is split there.
double pushforward_density(const std::function<double(double, double)>& kernel,
                           const std::function<double(double, int)>& clamp_mass, const ScalarFn& density,
                           double lo, double hi, double wall_lo, double wall_hi, std::size_t nodes, double y) {
  auto integrand = [&](double x) {
    if (x == y) return 0.0;
    return density(x) * kernel(x, y);
  };
  std::vector<double> cuts{lo, hi};
  for (double c : {y, 2.0 * y - wall_lo, 2.0 * y - wall_hi}) {
    if (std::isfinite(c) && c > lo && c < hi) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double share = (cuts[k + 1] - cuts[k]) / (hi - lo);
    const auto piece_nodes = std::max<std::size_t>(16, static_cast<std::size_t>(share * static_cast<double>(nodes)));
    total += cosine_trapezoid(integrand, cuts[k], cuts[k + 1], piece_nodes);
  }
  // A clamped move from x lands at (x + wall) / 2, so x = 2y - wall; dx/dy = 2.
  // At the midpoint of the walls the origin sits on the opposite wall; there the
  // density is the mean of the two one-sided limits.
  auto atom = [&](double wall, int direction) {
    if (!std::isfinite(wall)) return 0.0;
    const double x = 2.0 * y - wall;
    if (!(x >= wall_lo && x <= wall_hi)) return 0.0;
    const double weight = (x == wall_lo || x == wall_hi) ? 1.0 : 2.0;
    const double inside = std::clamp(x, inset(wall_lo, +1), inset(wall_hi, -1));
    return weight * density(inside) * clamp_mass(inside, direction);
  };
  total += atom(wall_hi, +1) + atom(wall_lo, -1);
  return total;
}

StationarityReport residual_report(const std::function<double(std::size_t, double)>& pushforward,
                                   const ScalarFn& density, std::size_t grid_points,
                                   std::span<const double> test_points) {
  if (grid_points < 8) throw std::invalid_argument("stationarity residual: grid needs at least 8 points");
  if (test_points.empty()) throw std::invalid_argument("stationarity residual: no test points");
  StationarityReport report;
  double coarse_residual = 0.0;
  for (double y : test_points) {
    const double target = density(y);
    report.max_residual = std::max(report.max_residual, std::abs(pushforward(grid_points, y) - target));
    coarse_residual = std::max(coarse_residual, std::abs(pushforward(grid_points / 2, y) - target));
  }
  report.coarse_grid = std::abs(coarse_residual - report.max_residual) > 1e-4;
  return report;
}

LineSection unit_line(const TargetSpec& target, double x, int direction) {
  return restrict_to_line(target.potential, Eigen::VectorXd::Constant(1, x),
                          Eigen::VectorXd::Constant(1, static_cast<double>(direction)));
}

}  // namespace

double ks_distance(std::span<const double> samples, const ScalarFn& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
  const std::vector<double> xs = sorted_copy(samples);
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  const std::vector<double> xs = sorted_copy(a);
  const std::vector<double> ys = sorted_copy(b);
  const double na = static_cast<double>(xs.size());
  const double nb = static_cast<double>(ys.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double t = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == t) ++i;
    while (j < ys.size() && ys[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

Histogram histogram(std::span<const double> samples, std::size_t bins, double lower, double upper) {
  if (bins == 0 || !(upper > lower)) throw std::invalid_argument("histogram: need bins > 0 and lower < upper");
  Histogram h{lower, upper, std::vector<std::size_t>(bins, 0), 0};
  const double width = (upper - lower) / static_cast<double>(bins);
  for (double x : samples) {
    if (!(x >= lower && x < upper)) {
      ++h.outside;
      continue;
    }
    const auto k = std::min(bins - 1, static_cast<std::size_t>((x - lower) / width));
    ++h.counts[k];
  }
  return h;
}

Ecdf::Ecdf(std::span<const double> samples) : sorted_(sorted_copy(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("Ecdf: empty sample");
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double effective_sample_size(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 4) throw std::invalid_argument("effective_sample_size: need at least 4 samples");
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += (samples[i] - mean) * (samples[i + lag] - mean);
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0)) return static_cast<double>(n);
  // Geyer: sum pairs Gamma_k = rho(2k) + rho(2k+1) while positive and monotone.
  double tau = -1.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    double pair = (autocov(2 * k) + autocov(2 * k + 1)) / c0;
    if (pair <= 0) break;
    pair = std::min(pair, prev_pair);
    tau += 2.0 * pair;
    prev_pair = pair;
  }
  return static_cast<double>(n) / std::max(tau, 1e-12);
}

double main_kernel_density(const TargetSpec& target, double x, double y, KernelVariant variant) {
  if (y == x) throw std::domain_error("main_kernel_density: density undefined on the diagonal");
  const DomainSet& domain = target.potential.domain();
  const double z = 2.0 * y - x;
  if (!(z > inset(domain.lower()(0), +1) && z < inset(domain.upper()(0), -1))) return 0.0;
  const int direction = y > x ? 1 : -1;
  const LineSection line = unit_line(target, x, direction);
  const double s = 2.0 * std::abs(y - x);
  const double rate_at_landing = line.slope(s);
  if (variant == KernelVariant::NegativeControl) {
    return rate_at_landing * std::exp(-(line.value(s) - line.value(0.0)));
  }
  if (rate_at_landing <= 0) return 0.0;
  return rate_at_landing * std::exp(-integrated_rate(line, s));
}

double main_kernel_clamp_mass(const TargetSpec& target, double x, int direction) {
  const LineSection line = unit_line(target, x, direction);
  if (!line.bounded()) return 0.0;
  return 0.5 * std::exp(-integrated_rate(line, line.t_max()));
}

StationarityReport stationarity_residual_main(const TargetSpec& target, std::size_t grid_points,
                                              std::span<const double> test_points, KernelVariant variant) {
  if (target.dim() != 1 || !target.density) {
    throw std::invalid_argument("stationarity_residual_main: needs a 1-D target with a density");
  }
  const DomainSet& domain = target.potential.domain();
  const double wall_lo = domain.lower()(0);
  const double wall_hi = domain.upper()(0);
  const double lo = std::isfinite(wall_lo) ? inset(wall_lo, +1) : target.support_lower;
  const double hi = std::isfinite(wall_hi) ? inset(wall_hi, -1) : target.support_upper;
  auto kernel = [&](double x, double y) { return main_kernel_density(target, x, y, variant); };
  auto clamp = [&](double x, int dir) {
    return variant == KernelVariant::Exact ? main_kernel_clamp_mass(target, x, dir) : 0.0;
  };
  auto push = [&](std::size_t nodes, double y) {
    return pushforward_density(kernel, clamp, target.density, lo, hi, wall_lo, wall_hi, nodes, y);
  };
  return residual_report(push, target.density, grid_points, test_points);
}

StationarityReport stationarity_residual_decomposed(const MonotoneDecomposition& dec, const ScalarFn& density,
                                                    double lower, double upper, std::size_t grid_points,
                                                    std::span<const double> test_points, KernelVariant variant) {
  auto kernel = [&](double x, double y) {
    if (variant == KernelVariant::Exact) return kernel_density_decomposed(dec, x, y);
    const double z = 2.0 * y - x;
    if (!(z > dec.lower_eval() && z < dec.upper_eval())) return 0.0;
    return y > x ? std::max(0.0, dec.du1(z)) * std::exp(-dec.u1(z))
                 : std::max(0.0, -dec.du2(z)) * std::exp(-dec.u2(z));
  };
  auto clamp = [&](double x, int dir) { return variant == KernelVariant::Exact ? dec.clamp_mass(x, dir) : 0.0; };
  const double lo = std::max(lower, dec.lower_eval());
  const double hi = std::min(upper, dec.upper_eval());
  auto push = [&](std::size_t nodes, double y) {
    return pushforward_density(kernel, clamp, density, lo, hi, dec.lower(), dec.upper(), nodes, y);
  };
  return residual_report(push, density, grid_points, test_points);
}

std::vector<double> interior_test_points(double lower, double upper, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lower + (upper - lower) * static_cast<double>(i + 1) / static_cast<double>(count + 1);
  }
  return out;
}

}  // namespace irf
