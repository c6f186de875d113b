#include "irf/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "irf/errors.hpp"

namespace irf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DomainSet::DomainSet(Kind kind, Eigen::VectorXd lower, Eigen::VectorXd upper)
    : kind_(kind), lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0) {
    throw std::invalid_argument("DomainSet: bound vectors must be non-empty and equal length");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(lower_(i) < upper_(i))) {
      throw std::invalid_argument("DomainSet: lower bound must be < upper bound");
    }
  }
}

DomainSet DomainSet::full_space(int dim) {
  if (dim < 1) throw std::invalid_argument("DomainSet: dimension must be >= 1");
  return {Kind::FullSpace, Eigen::VectorXd::Constant(dim, -kInf), Eigen::VectorXd::Constant(dim, kInf)};
}

DomainSet DomainSet::interval(double lower, double upper) {
  return box(Eigen::VectorXd::Constant(1, lower), Eigen::VectorXd::Constant(1, upper));
}

DomainSet DomainSet::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  return {Kind::IntervalProduct, std::move(lower), std::move(upper)};
}

DomainSet DomainSet::orthant_cube(const Eigen::VectorXd& signs, int cube_dim, double half_width) {
  if (cube_dim < 0 || !(half_width > 0)) {
    throw std::invalid_argument("DomainSet: cube needs non-negative dimension and positive half-width");
  }
  const auto n_orthant = signs.size();
  Eigen::VectorXd lower(n_orthant + cube_dim);
  Eigen::VectorXd upper(n_orthant + cube_dim);
  for (Eigen::Index i = 0; i < n_orthant; ++i) {
    if (signs(i) > 0) {
      lower(i) = 0.0;
      upper(i) = kInf;
    } else if (signs(i) < 0) {
      lower(i) = -kInf;
      upper(i) = 0.0;
    } else {
      throw std::invalid_argument("DomainSet: orthant signs must be +1 or -1");
    }
  }
  lower.tail(cube_dim).setConstant(-half_width);
  upper.tail(cube_dim).setConstant(half_width);
  return {Kind::OrthantCubeProduct, std::move(lower), std::move(upper)};
}

bool DomainSet::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x(i) > lower_(i) && x(i) < upper_(i))) return false;
  }
  return true;
}

bool DomainSet::bounded() const { return lower_.allFinite() && upper_.allFinite(); }

RayInterval DomainSet::ray(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
  if (!contains(x)) throw DomainError("ray: base point outside " + describe());
  if (v.size() != x.size()) throw std::invalid_argument("ray: direction has wrong dimension");
  RayInterval r{-kInf, kInf};
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (v(i) > 0) {
      r.t_upper = std::min(r.t_upper, (upper_(i) - x(i)) / v(i));
      r.t_lower = std::max(r.t_lower, (lower_(i) - x(i)) / v(i));
    } else if (v(i) < 0) {
      r.t_upper = std::min(r.t_upper, (lower_(i) - x(i)) / v(i));
      r.t_lower = std::max(r.t_lower, (upper_(i) - x(i)) / v(i));
    }
  }
  return r;
}

Eigen::VectorXd DomainSet::project(const Eigen::VectorXd& x, double nudge) const {
  Eigen::VectorXd out = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double lo = lower_(i) + nudge * std::max(1.0, std::abs(lower_(i)));
    const double hi = upper_(i) - nudge * std::max(1.0, std::abs(upper_(i)));
    if (std::isfinite(lower_(i)) && out(i) < lo) out(i) = lo;
    if (std::isfinite(upper_(i)) && out(i) > hi) out(i) = hi;
  }
  return out;
}

Eigen::VectorXd DomainSet::interior_point() const {
  Eigen::VectorXd x(dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const bool lo = std::isfinite(lower_(i));
    const bool hi = std::isfinite(upper_(i));
    if (lo && hi) {
      x(i) = 0.5 * (lower_(i) + upper_(i));
    } else if (lo) {
      x(i) = lower_(i) + 1.0;
    } else if (hi) {
      x(i) = upper_(i) - 1.0;
    } else {
      x(i) = 0.0;
    }
  }
  return x;
}

std::string DomainSet::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::FullSpace: os << "R^" << dim(); return os.str();
    case Kind::IntervalProduct: os << "box"; break;
    case Kind::OrthantCubeProduct: os << "orthant x cube"; break;
  }
  os << '[';
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (i > 0) os << " x ";
    os << '(' << lower_(i) << ',' << upper_(i) << ')';
  }
  os << ']';
  return os.str();
}

}  // namespace irf
