#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "irf/domain.hpp"

namespace irf {

using ScalarFn = std::function<double(double)>;

class LineSection;

/// Negative log-density U (up to an additive constant) of a target
/// pi ~ exp(-U) on an open domain, together with its gradient.
///
/// Potentials are immutable after construction and may be shared across
/// threads. `value`/`gradient` reject points outside the domain.
class Potential {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  /// Optional fast path building the 1-D restriction along a ray.
  /// Receives base point, unit direction and returns (value, slope) closures.
  using LineFactory =
      std::function<std::pair<ScalarFn, ScalarFn>(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

  Potential(DomainSet domain, ValueFn value, GradientFn gradient, bool log_concave = false);

  [[nodiscard]] int dim() const noexcept { return domain_->dim(); }
  [[nodiscard]] const DomainSet& domain() const noexcept { return *domain_; }
  /// Registered convexity of U; trusted, not verified.
  [[nodiscard]] bool log_concave() const noexcept { return log_concave_; }

  [[nodiscard]] double value(const Eigen::VectorXd& x) const;
  [[nodiscard]] Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  /// Unchecked evaluation; callers guarantee `x` lies in the domain.
  [[nodiscard]] double value_unchecked(const Eigen::VectorXd& x) const { return value_(x); }
  [[nodiscard]] Eigen::VectorXd gradient_unchecked(const Eigen::VectorXd& x) const {
    return gradient_(x);
  }

  Potential& with_line_factory(LineFactory factory);
  [[nodiscard]] const LineFactory& line_factory() const noexcept { return line_factory_; }

 private:
  std::shared_ptr<const DomainSet> domain_;
  ValueFn value_;
  GradientFn gradient_;
  LineFactory line_factory_;
  bool log_concave_;
};

/// The 1-D restriction t -> U(x + v t) on the ray t in [0, t_max).
class LineSection {
 public:
  /// `eval_limit` defaults to t_max pulled inward by 1e-12 max(1, t_max).
  LineSection(Eigen::VectorXd base, Eigen::VectorXd direction, ScalarFn value, ScalarFn slope,
              double t_max, double eval_limit = std::numeric_limits<double>::quiet_NaN());

  [[nodiscard]] const Eigen::VectorXd& base() const noexcept { return base_; }
  [[nodiscard]] const Eigen::VectorXd& direction() const noexcept { return direction_; }
  [[nodiscard]] double t_min() const noexcept { return 0.0; }
  [[nodiscard]] double t_max() const noexcept { return t_max_; }
  [[nodiscard]] bool bounded() const noexcept;

  /// Largest parameter at which the section may be evaluated; strictly inside
  /// the domain on bounded rays, +inf otherwise.
  [[nodiscard]] double eval_limit() const noexcept { return eval_limit_; }

  /// U(x + v t). Non-finite values map to +inf.
  [[nodiscard]] double value(double t) const;
  /// d/dt U(x + v t) = grad U(x + v t)^T v.
  [[nodiscard]] double slope(double t) const;

  [[nodiscard]] Eigen::VectorXd point(double t) const { return base_ + t * direction_; }

 private:
  Eigen::VectorXd base_;
  Eigen::VectorXd direction_;
  ScalarFn value_;
  ScalarFn slope_;
  double t_max_;
  double eval_limit_;
};

/// Restrict `p` to the ray through `x` along the unit vector `v`.
/// Throws DomainError if `x` is outside the domain and std::invalid_argument
/// if |v| differs from 1 by more than 1e-12.
LineSection restrict_to_line(const Potential& p, const Eigen::VectorXd& x, const Eigen::VectorXd& v);

/// Result of comparing the analytic gradient with central finite differences.
struct GradientCheck {
  double max_relative_error;
  bool valid;            ///< false when the probe stencil left the domain or U was non-finite
  std::string message;
};

/// max_i |fd_i - grad_i| / (1 + |grad_i|) with step 1e-6 (1 + |x_i|).
GradientCheck check_gradient(const Potential& p, const Eigen::VectorXd& x);

}  // namespace irf
