#include "irf/hit_and_run.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irf/errors.hpp"
#include "irf/truncated.hpp"

namespace irf {

ArrivalResult arrival_for(const Potential& p, const LineSection& line, double v_uniform) {
  if (p.log_concave()) return solve_truncated_arrival(line, line.t_min(), line.t_max(), v_uniform);
  return solve_arrival(line, -std::log(v_uniform));
}

Eigen::VectorXd transition(const Potential& p, const Eigen::VectorXd& x, double v_uniform,
                           const Eigen::VectorXd& direction) {
  const LineSection line = restrict_to_line(p, x, direction);
  const ArrivalResult arrival = arrival_for(p, line, v_uniform);
  return x + (0.5 * arrival.tau) * direction;
}

void step(const Potential& p, ChainState& state, std::uint64_t axis_hold) {
  if (axis_hold == 0) throw std::invalid_argument("step: axis_hold must be >= 1");
  Eigen::VectorXd direction;
  if (axis_hold == 1 || state.hold_remaining == 0 || state.held_direction.size() != p.dim()) {
    direction = sample_unit_sphere(state.rng, p.dim());
    state.held_direction = direction;
    state.hold_remaining = axis_hold - 1;
  } else {
    direction = state.rng.sign() * state.held_direction;
    --state.hold_remaining;
  }
  const double v_uniform = state.rng.uniform_open();
  Eigen::VectorXd next = transition(p, state.position, v_uniform, direction);
  if (!p.domain().contains(next)) {
    throw NumericalError("step: update left the domain");
  }
  state.position = std::move(next);
  ++state.step_count;
}

Eigen::VectorXd default_start(const Potential& p) {
  const DomainSet& domain = p.domain();
  Eigen::VectorXd x = domain.interior_point();
  if (domain.bounded()) return x;
  // Descent with a step that grows after every accepted move and halves otherwise.
  double rate = 0.1;
  double u = p.value_unchecked(x);
  for (int it = 0; it < 200 && rate > 1e-12; ++it) {
    const Eigen::VectorXd g = p.gradient_unchecked(x);
    if (!g.allFinite() || g.norm() < 1e-10) break;
    const Eigen::VectorXd next = x - rate * g;
    const double u_next = domain.contains(next) ? p.value_unchecked(next) : std::numeric_limits<double>::infinity();
    if (u_next < u) {
      x = next;
      u = u_next;
      rate *= 1.5;
    } else {
      rate *= 0.5;
    }
  }
  return x;
}

SampleBatch run(const Potential& p, const SamplerConfig& cfg, const Eigen::VectorXd& x0) {
  if (!p.domain().contains(x0)) throw DomainError("run: starting point outside the domain");
  const auto start = std::chrono::steady_clock::now();
  SampleBatch batch;
  batch.positions.resize(static_cast<Eigen::Index>(cfg.steps), p.dim());
  batch.meta = {cfg.seed, cfg.target_name, "irf", 0.0};

  ChainState state(x0, cfg.seed);
  for (std::uint64_t i = 0; i < cfg.burn_in; ++i) step(p, state, cfg.axis_hold);
  for (std::uint64_t i = 0; i < cfg.steps; ++i) {
    step(p, state, cfg.axis_hold);
    batch.positions.row(static_cast<Eigen::Index>(i)) = state.position.transpose();
  }
  batch.meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return batch;
}

Eigen::MatrixXd transition_function_surface(const Potential& p, double x, std::span<const double> v_grid) {
  if (p.dim() != 1) throw std::invalid_argument("transition_function_surface: 1-D targets only");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(v_grid.size()), 2);
  const Eigen::VectorXd base = Eigen::VectorXd::Constant(1, x);
  for (std::size_t i = 0; i < v_grid.size(); ++i) {
    for (int col = 0; col < 2; ++col) {
      const Eigen::VectorXd dir = Eigen::VectorXd::Constant(1, col == 0 ? -1.0 : 1.0);
      out(static_cast<Eigen::Index>(i), col) = transition(p, base, v_grid[i], dir)(0);
    }
  }
  return out;
}

}  // namespace irf
