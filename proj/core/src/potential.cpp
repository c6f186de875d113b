#include "irf/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irf/errors.hpp"

namespace irf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Potential::Potential(DomainSet domain, ValueFn value, GradientFn gradient, bool log_concave)
    : domain_(std::make_shared<const DomainSet>(std::move(domain))),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      log_concave_(log_concave) {
  if (!value_ || !gradient_) throw std::invalid_argument("Potential: value and gradient are required");
}

double Potential::value(const Eigen::VectorXd& x) const {
  if (!domain_->contains(x)) throw DomainError("potential evaluated outside " + domain_->describe());
  return value_(x);
}

Eigen::VectorXd Potential::gradient(const Eigen::VectorXd& x) const {
  if (!domain_->contains(x)) throw DomainError("gradient evaluated outside " + domain_->describe());
  return gradient_(x);
}

Potential& Potential::with_line_factory(LineFactory factory) {
  line_factory_ = std::move(factory);
  return *this;
}

LineSection::LineSection(Eigen::VectorXd base, Eigen::VectorXd direction, ScalarFn value,
                         ScalarFn slope, double t_max, double eval_limit)
    : base_(std::move(base)),
      direction_(std::move(direction)),
      value_(std::move(value)),
      slope_(std::move(slope)),
      t_max_(t_max),
      eval_limit_(eval_limit) {
  if (!(t_max > 0)) throw std::invalid_argument("LineSection: t_max must be positive");
  if (std::isnan(eval_limit_)) {
    eval_limit_ = std::isfinite(t_max_) ? t_max_ - 1e-12 * std::max(1.0, t_max_) : t_max_;
  }
  if (!(eval_limit_ > 0 && eval_limit_ <= t_max_)) {
    throw std::invalid_argument("LineSection: evaluation limit must lie in (0, t_max]");
  }
}

bool LineSection::bounded() const noexcept { return std::isfinite(t_max_); }

double LineSection::value(double t) const {
  const double u = value_(t);
  return std::isnan(u) ? kInf : u;
}

double LineSection::slope(double t) const { return slope_(t); }

LineSection restrict_to_line(const Potential& p, const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
  if (x.size() != p.dim() || v.size() != p.dim()) {
    throw std::invalid_argument("restrict_to_line: dimension mismatch");
  }
  if (std::abs(v.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("restrict_to_line: direction must be a unit vector");
  }
  const DomainSet& domain = p.domain();
  const RayInterval ray = domain.ray(x, v);  // throws DomainError when x is outside

  ScalarFn value;
  ScalarFn slope;
  if (p.line_factory()) {
    std::tie(value, slope) = p.line_factory()(x, v);
  } else {
    // Held by value so the section stays valid after the potential goes away.
    value = [pot = p, x, v](double t) { return pot.value_unchecked(x + t * v); };
    slope = [pot = p, x, v](double t) { return pot.gradient_unchecked(x + t * v).dot(v); };
  }
  // Rays that graze a wall at a shallow angle may need a larger inward margin
  // before the evaluation point is strictly inside.
  double eval_limit = ray.t_upper;
  if (std::isfinite(ray.t_upper)) {
    double margin = 1e-12 * std::max(1.0, ray.t_upper);
    while (!domain.contains(x + (ray.t_upper - margin) * v)) {
      margin *= 2.0;
      if (margin >= ray.t_upper) throw NumericalError("restrict_to_line: degenerate ray section");
    }
    eval_limit = ray.t_upper - margin;
  }
  return LineSection(x, v, std::move(value), std::move(slope), ray.t_upper, eval_limit);
}

GradientCheck check_gradient(const Potential& p, const Eigen::VectorXd& x) {
  GradientCheck out{0.0, true, {}};
  const DomainSet& domain = p.domain();
  if (!domain.contains(x)) {
    return {kInf, false, "point is not interior to the domain"};
  }
  const Eigen::VectorXd g = p.gradient_unchecked(x);
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x(i)));
    probe(i) = x(i) + h;
    const bool up_ok = domain.contains(probe);
    const double up = up_ok ? p.value_unchecked(probe) : kInf;
    probe(i) = x(i) - h;
    const bool down_ok = domain.contains(probe);
    const double down = down_ok ? p.value_unchecked(probe) : kInf;
    probe(i) = x(i);
    if (!up_ok || !down_ok) {
      return {kInf, false, "finite-difference stencil leaves the domain (point on or near the boundary)"};
    }
    if (!std::isfinite(up) || !std::isfinite(down) || !std::isfinite(g(i))) {
      throw NumericalError("check_gradient: non-finite potential near the probe point");
    }
    const double fd = (up - down) / (2.0 * h);
    out.max_relative_error = std::max(out.max_relative_error, std::abs(fd - g(i)) / (1.0 + std::abs(g(i))));
  }
  return out;
}

}  // namespace irf
