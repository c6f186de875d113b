#include "irf/truncated.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irf/errors.hpp"

namespace irf {

namespace {
constexpr int kMaxDoublings = 60;
}

std::pair<double, double> line_domain_bounds(const DomainSet& domain, const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& v) {
  const RayInterval ray = domain.ray(x, v);
  return {0.0, ray.t_upper};
}

double argmin_on_segment(const LineSection& line, double t_min, double t_max) {
  if (!(t_max > t_min)) throw std::invalid_argument("argmin_on_segment: empty segment");
  const double hi_eval = std::min(t_max, line.eval_limit());
  if (line.slope(t_min) >= 0) return t_min;

  double lo = t_min;
  double hi = hi_eval;
  if (!std::isfinite(hi)) {
    hi = t_min + 1.0;
    int doublings = 0;
    while (line.slope(hi) < 0) {
      lo = hi;
      hi = t_min + 2.0 * (hi - t_min);
      if (++doublings > kMaxDoublings) {
        throw DivergenceError("argmin_on_segment: potential decreases along the whole ray");
      }
    }
  } else if (line.slope(hi) <= 0) {
    return t_max;
  }
  return detail::bisect_predicate([&line](double t) { return line.slope(t) >= 0; }, lo, hi);
}

ArrivalResult solve_truncated_arrival(const LineSection& line, double t_min, double t_max, double v_uniform) {
  if (!(v_uniform > 0.0 && v_uniform <= 1.0)) {
    throw std::invalid_argument("solve_truncated_arrival: V must lie in (0, 1]");
  }
  const double threshold = -std::log(v_uniform);
  if (threshold == 0.0) return {t_min, 0.0, false};

  const double t_star = argmin_on_segment(line, t_min, t_max);
  const double hi_eval = std::min(t_max, line.eval_limit());
  if (t_star >= hi_eval) return {t_max, 0.0, true};

  const double base = line.value(t_star);
  const double target = base + threshold;
  auto value = [&line](double t) { return line.value(t); };

  if (std::isfinite(hi_eval)) {
    const double rise = line.value(hi_eval) - base;
    if (rise - threshold > 0) {
      return {detail::bisect_increasing(value, t_star, hi_eval, target), threshold, false};
    }
    return {t_max, std::max(0.0, rise), true};
  }

  double lo = t_star;
  double step = 1.0;
  for (int doubling = 0; doubling <= kMaxDoublings; ++doubling) {
    const double hi = t_star + step;
    if (line.value(hi) >= target) return {detail::bisect_increasing(value, lo, hi, target), threshold, false};
    lo = hi;
    step *= 2.0;
  }
  throw DivergenceError("solve_truncated_arrival: potential rise stays below the threshold");
}

bool spot_check_convexity(const LineSection& line, double limit, int probes) {
  const double end = std::min(limit, line.eval_limit());
  for (int k = 1; k < probes; ++k) {
    const double a = end * (k - 1) / probes;
    const double b = end * (k + 1) / probes;
    const double mid = 0.5 * (a + b);
    const double chord = 0.5 * (line.value(a) + line.value(b));
    if (line.value(mid) > chord + 1e-9 * (1.0 + std::abs(chord))) return false;
  }
  return true;
}

}  // namespace irf
