#pragma once

#include <utility>

#include "irf/arrival_time.hpp"
#include "irf/domain.hpp"

namespace irf {

/// t_min = min{t >= 0 : x + v t in D}, t_max = sup{t >= 0 : x + v t in D}.
/// For an interior x, t_min is 0. Throws DomainError when x is not in D.
std::pair<double, double> line_domain_bounds(const DomainSet& domain, const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& v);

/// Minimizer of a convex line section over [t_min, t_max], by bisection on the
/// sign of the slope. Infinite t_max is handled by bracket doubling.
double argmin_on_segment(const LineSection& line, double t_min, double t_max);

/// Arrival time for a log-concave density truncated to the ray [t_min, t_max]:
/// locate t*, then either solve U(t) - U(t*) = -log V on [t*, t_max] or clamp
/// at t_max when the remaining potential rise is too small.
ArrivalResult solve_truncated_arrival(const LineSection& line, double t_min, double t_max, double v_uniform);

/// Midpoint-chord convexity spot check of a section on [0, limit]
/// (debug aid; convexity is otherwise trusted).
bool spot_check_convexity(const LineSection& line, double limit, int probes = 32);

}  // namespace irf
