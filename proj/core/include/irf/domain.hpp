#pragma once

#include <string>

#include <Eigen/Core>

namespace irf {

/// Parameter interval {x + v t : t in (t_lower, t_upper)} of a line inside a domain.
struct RayInterval {
  double t_lower;  ///< <= 0 for an interior base point
  double t_upper;  ///< >= 0; +inf when the ray never leaves the domain
};

/// Open, axis-aligned domain: the whole space, a product of intervals, or the
/// product of a sign orthant with a centered cube. Membership is strict.
class DomainSet {
 public:
  enum class Kind { FullSpace, IntervalProduct, OrthantCubeProduct };

  static DomainSet full_space(int dim);
  static DomainSet interval(double lower, double upper);
  static DomainSet box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  /// First signs.size() coordinates restricted to the orthant sign(x_i) = signs[i],
  /// remaining `cube_dim` coordinates to (-half_width, half_width).
  static DomainSet orthant_cube(const Eigen::VectorXd& signs, int cube_dim, double half_width);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(lower_.size()); }
  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const Eigen::VectorXd& lower() const noexcept { return lower_; }
  [[nodiscard]] const Eigen::VectorXd& upper() const noexcept { return upper_; }

  [[nodiscard]] bool contains(const Eigen::VectorXd& x) const;
  /// True when every coordinate has finite lower and upper bounds.
  [[nodiscard]] bool bounded() const;

  /// Exact intersection of the line x + v t with the domain. Requires x inside.
  [[nodiscard]] RayInterval ray(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;

  /// Clamp every coordinate into the domain, nudged strictly inside by
  /// `nudge * max(1, |bound|)`.
  [[nodiscard]] Eigen::VectorXd project(const Eigen::VectorXd& x, double nudge = 1e-12) const;

  /// Midpoint for bounded coordinates, bound -+ 1 for half-lines, 0 otherwise.
  [[nodiscard]] Eigen::VectorXd interior_point() const;

  [[nodiscard]] std::string describe() const;

 private:
  DomainSet(Kind kind, Eigen::VectorXd lower, Eigen::VectorXd upper);

  Kind kind_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

}  // namespace irf
