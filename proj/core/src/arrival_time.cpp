#include "irf/arrival_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irf/errors.hpp"

namespace irf {

namespace {

constexpr int kUniformProbes = 32;
constexpr int kGeometricProbes = 32;
constexpr int kValidationProbes = 32;
constexpr int kMaxRefineDepth = 8;
constexpr int kMaxDoublings = 60;

int slope_sign(double s) { return s > 0 ? 1 : (s < 0 ? -1 : 0); }

struct Scanner {
  const LineSection& line;
  MonotoneSegmentation out;

  bool ascending(double t) const { return line.slope(t) > 0; }

  // Appends segments covering [a, b]; out.breakpoints already ends with a.
  void scan(double a, double b, int depth) {
    std::vector<double> probes;
    probes.reserve(kUniformProbes + kGeometricProbes + 1);
    const double width = b - a;
    for (int k = 0; k <= kUniformProbes; ++k) probes.push_back(a + width * k / kUniformProbes);
    for (int k = 1; k <= kGeometricProbes; ++k) probes.push_back(a + width * std::ldexp(1.0, -k));
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

    std::vector<int> signs(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) signs[i] = slope_sign(line.slope(probes[i]));

    double run_start = a;
    std::size_t run_first = 0;
    for (std::size_t i = 1; i < probes.size(); ++i) {
      if ((signs[i] > 0) == (signs[run_first] > 0)) continue;
      const double cut = detail::bisect_predicate([this](double t) { return ascending(t); },
                                                  probes[i - 1], probes[i]);
      close_run(run_start, cut, signs, run_first, i, depth);
      run_start = cut;
      run_first = i;
    }
    close_run(run_start, b, signs, run_first, probes.size(), depth);
  }

  void close_run(double s, double e, const std::vector<int>& signs, std::size_t first,
                 std::size_t last, int depth) {
    if (!(e > s)) return;
    const bool asc = signs[first] > 0;
    bool all_zero = true;
    for (std::size_t i = first; i < last; ++i) all_zero = all_zero && signs[i] == 0;

    bool consistent = true;
    for (int k = 1; k <= kValidationProbes && consistent; ++k) {
      const double t = s + (e - s) * (k - 0.5) / kValidationProbes;
      const double sl = line.slope(t);
      consistent = (sl > 0) == asc && (!all_zero || sl == 0);
    }
    if (!consistent) {
      if (depth < kMaxRefineDepth) {
        scan(s, e, depth + 1);
        return;
      }
      out.resolution_warning = true;
    }
    push(e, asc ? 1 : (all_zero ? 0 : -1));
  }

  void push(double e, int sign) {
    if (!out.signs.empty() && out.signs.back() == sign) {
      out.breakpoints.back() = e;
      return;
    }
    out.breakpoints.push_back(e);
    out.signs.push_back(sign);
  }
};

}  // namespace

namespace detail {

double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi) {
  const bool at_lo = pred(lo);
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 1e-12 * (1.0 + std::abs(hi))) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double bisect_increasing(const ScalarFn& f, double lo, double hi, double target) {
  if (f(lo) >= target) return lo;
  double f_hi = f(hi);
  if (f_hi < target) return hi;
  // Near a wall the rate can be huge, so a narrow bracket alone does not pin the
  // integrated rate; keep going until the overshoot is small as well.
  const double value_tol = 1e-11 * (1.0 + std::abs(target));
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 1e-12 * (1.0 + std::abs(hi)) && f_hi - target <= value_tol) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm >= target) {
      hi = mid;
      f_hi = fm;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace detail

MonotoneSegmentation find_segmentation(const LineSection& line, double begin, double end) {
  if (!(begin >= 0.0) || !(end > begin) || !std::isfinite(end)) {
    throw std::invalid_argument("find_segmentation: need 0 <= begin < end < inf");
  }
  if (end > line.eval_limit()) {
    throw std::out_of_range("find_segmentation: search limit beyond the evaluable ray");
  }
  Scanner scanner{line, {}};
  scanner.out.breakpoints.push_back(begin);
  scanner.scan(begin, end, 0);
  return std::move(scanner.out);
}

double integrated_rate(const LineSection& line, const MonotoneSegmentation& seg, double t) {
  if (seg.breakpoints.empty() || t < seg.begin() || t > seg.end()) {
    throw std::out_of_range("integrated_rate: t outside the segmented range");
  }
  double mass = 0.0;
  for (std::size_t k = 0; k < seg.segments(); ++k) {
    const double s = seg.breakpoints[k];
    if (s >= t) break;
    if (seg.signs[k] <= 0) continue;
    const double e = std::min(t, seg.breakpoints[k + 1]);
    mass += std::max(0.0, line.value(e) - line.value(s));
  }
  return mass;
}

double integrated_rate(const LineSection& line, double t) {
  if (t < 0 || t > line.t_max()) throw std::out_of_range("integrated_rate: t outside [0, t_max]");
  if (t == 0) return 0.0;
  const double end = std::min(t, line.eval_limit());
  return integrated_rate(line, find_segmentation(line, 0.0, end), end);
}

ArrivalResult solve_arrival(const LineSection& line, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("solve_arrival: threshold must be >= 0");
  if (threshold == 0.0) return {0.0, 0.0, false};

  double mass = 0.0;
  // Walks one bracket; returns true and sets tau once the threshold is crossed.
  auto consume = [&](double a, double b, double& tau) {
    const MonotoneSegmentation seg = find_segmentation(line, a, b);
    for (std::size_t k = 0; k < seg.segments(); ++k) {
      if (seg.signs[k] <= 0) continue;
      const double s = seg.breakpoints[k];
      const double e = seg.breakpoints[k + 1];
      const double base = line.value(s);
      const double increment = line.value(e) - base;
      if (mass + increment >= threshold) {
        const double target = base + (threshold - mass);
        tau = detail::bisect_increasing([&line](double t) { return line.value(t); }, s, e, target);
        mass = threshold;
        return true;
      }
      mass += std::max(0.0, increment);
    }
    return false;
  };

  double tau = 0.0;
  if (line.bounded()) {
    if (consume(0.0, line.eval_limit(), tau)) return {tau, mass, false};
    return {line.t_max(), mass, true};
  }

  double a = 0.0;
  double b = 1.0;
  for (int doubling = 0; doubling <= kMaxDoublings; ++doubling) {
    if (consume(a, b, tau)) return {tau, mass, false};
    a = b;
    b *= 2.0;
  }
  throw DivergenceError("solve_arrival: integrated rate stays below the threshold along an unbounded ray");
}

}  // namespace irf
