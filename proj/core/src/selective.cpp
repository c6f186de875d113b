#include "irf/selective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irf/errors.hpp"
#include "irf/hit_and_run.hpp"
#include "irf/langevin.hpp"
#include "irf/special_functions.hpp"

namespace irf::selective {

namespace {

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

Eigen::VectorXd start_point(const SelectionEvent& ev) {
  return selective_domain(ev).project(ev.observed_opt);
}

}  // namespace

DomainSet selective_domain(const SelectionEvent& ev) {
  return DomainSet::orthant_cube(ev.signs, static_cast<int>(ev.inactive.size()), ev.lasso_penalty);
}

Potential selective_potential(const SelectionEvent& ev, const Randomization& randomization) {
  if (ev.dim() == 0) throw std::invalid_argument("selective_potential: empty problem");
  const Eigen::VectorXd intercept = -ev.data_map * ev.data + ev.offset;
  const Eigen::MatrixXd opt_map = ev.opt_map;
  const Randomization g = randomization;

  Potential p(
      selective_domain(ev),
      [intercept, opt_map, g](const Eigen::VectorXd& o) {
        return g.neg_log_density(intercept + opt_map * o);
      },
      [intercept, opt_map, g](const Eigen::VectorXd& o) {
        return Eigen::VectorXd(opt_map.transpose() * g.neg_log_density_gradient(intercept + opt_map * o));
      },
      true);

  // omega is affine along the ray: omega(t) = omega0 + t * slope_dir.
  p.with_line_factory([intercept, opt_map, g](const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
    const Eigen::VectorXd w0 = intercept + opt_map * x;
    const Eigen::VectorXd dw = opt_map * v;
    const double inv_s = 1.0 / g.scale;
    if (g.kind == RandomizationKind::Gaussian) {
      const double a = 0.5 * dw.squaredNorm() * inv_s * inv_s;
      const double b = w0.dot(dw) * inv_s * inv_s;
      const double c = 0.5 * w0.squaredNorm() * inv_s * inv_s;
      return std::pair<ScalarFn, ScalarFn>{[a, b, c](double t) { return (a * t + b) * t + c; },
                                           [a, b](double t) { return 2.0 * a * t + b; }};
    }
    return std::pair<ScalarFn, ScalarFn>{
        [w0, dw, inv_s](double t) { return (w0 + t * dw).lpNorm<1>() * inv_s; },
        [w0, dw, inv_s](double t) {
          double s = 0.0;
          for (Eigen::Index i = 0; i < w0.size(); ++i) {
            const double w = w0(i) + t * dw(i);
            s += (w > 0 ? dw(i) : (w < 0 ? -dw(i) : 0.0));
          }
          return s * inv_s;
        }};
  });
  return p;
}

SampleBatch sample_opt_variables(const SelectionEvent& ev, const SelectiveProblem& prob, std::uint64_t steps,
                                 std::uint64_t seed) {
  const Potential p = selective_potential(ev, prob.randomization);
  SamplerConfig cfg;
  cfg.steps = steps;
  cfg.seed = seed;
  cfg.target_name = "selective:" + to_string(prob.randomization.kind);
  return run(p, cfg, start_point(ev));
}

SampleBatch sample_opt_variables_langevin(const SelectionEvent& ev, const SelectiveProblem& prob,
                                          std::uint64_t steps, std::uint64_t seed, double step_size) {
  const Potential p = selective_potential(ev, prob.randomization);
  LangevinConfig cfg;
  cfg.steps = steps;
  cfg.seed = seed;
  cfg.step_size = step_size;
  cfg.target_name = "selective:" + to_string(prob.randomization.kind);
  return run_langevin(p, cfg, start_point(ev));
}

std::vector<CoordinateInference> pvalues_and_intervals(const SampleBatch& batch, const SelectionEvent& ev,
                                                       const SelectiveProblem& prob,
                                                       const InferenceOptions& options) {
  if (batch.rows() == 0) throw std::invalid_argument("pvalues_and_intervals: empty batch");
  if (batch.dim() != ev.dim()) throw std::invalid_argument("pvalues_and_intervals: batch dimension mismatch");
  if (options.grid_points < 3) throw std::invalid_argument("pvalues_and_intervals: grid too small");

  const Eigen::Index n = batch.rows();
  const int grid = options.grid_points;
  const int center = grid / 2;
  const double alpha = 1.0 - options.level;
  const Randomization& g = prob.randomization;

  // omega at every sample with D at its observed value (one column per sample).
  const Eigen::VectorXd intercept = -ev.data_map * ev.data + ev.offset;
  const Eigen::MatrixXd omegas = (ev.opt_map * batch.positions.transpose()).colwise() + intercept;
  Eigen::VectorXd base_nll(n);
  for (Eigen::Index i = 0; i < n; ++i) base_nll(i) = g.neg_log_density(omegas.col(i));

  std::vector<CoordinateInference> out;
  for (int j = 0; j < ev.active_size(); ++j) {
    CoordinateInference ci;
    ci.variable = ev.active[j];
    ci.estimate = ev.data(j);
    const double var = ev.data_cov(j, j);
    ci.std_error = std::sqrt(var);

    // Moving beta-bar_j by dt with the nuisance fixed shifts D by dt * direction,
    // hence omega by -dt * data_map * direction.
    const Eigen::VectorXd direction = ev.data_cov.col(j) / var;
    const Eigen::VectorXd omega_shift = -ev.data_map * direction;

    Eigen::VectorXd t_grid(grid);
    Eigen::VectorXd log_w(grid);
    Eigen::MatrixXd log_ratio(n, grid);
    for (int k = 0; k < grid; ++k) {
      const double t = ci.estimate + ci.std_error * options.grid_halfwidth_se *
                                         (2.0 * static_cast<double>(k - center) / static_cast<double>(grid - 1));
      t_grid(k) = t;
      const double dt = t - ci.estimate;
      for (Eigen::Index i = 0; i < n; ++i) {
        log_ratio(i, k) = base_nll(i) - g.neg_log_density(omegas.col(i) + dt * omega_shift);
      }
      log_w(k) = log_sum_exp(log_ratio.col(k)) - std::log(static_cast<double>(n));
    }

    // Two-sided selective p-value of H0: beta*_j = theta, trapezoid mass of the
    // tilted law on either side of the observed value (grid center).
    auto pvalue_at = [&](double theta) {
      Eigen::VectorXd log_f = log_w.array() - (t_grid.array() - theta).square() / (2.0 * var);
      const double m = log_f.maxCoeff();
      const Eigen::VectorXd f = (log_f.array() - m).exp();
      const double total = f.sum() - 0.5 * (f(0) + f(grid - 1));
      const double upper = f.segment(center, grid - center).sum() - 0.5 * (f(center) + f(grid - 1));
      const double tail = std::clamp(upper / total, 0.0, 1.0);
      return std::min(1.0, 2.0 * std::min(tail, 1.0 - tail));
    };

    ci.pvalue = pvalue_at(0.0);

    // Invert over theta on the same grid; acceptance region is an interval.
    std::vector<double> p_theta(grid);
    for (int k = 0; k < grid; ++k) p_theta[k] = pvalue_at(t_grid(k));
    int first = -1;
    int last = -1;
    for (int k = 0; k < grid; ++k) {
      if (p_theta[k] >= alpha) {
        if (first < 0) first = k;
        last = k;
      }
    }
    if (first < 0) {
      ci.ci_lower = ci.ci_upper = ci.estimate;
    } else {
      auto crossing = [&](int inside, int outside) {
        const double pi = p_theta[inside] - alpha;
        const double po = p_theta[outside] - alpha;
        const double frac = pi / (pi - po);
        return t_grid(inside) + frac * (t_grid(outside) - t_grid(inside));
      };
      ci.ci_lower = first > 0 ? crossing(first, first - 1) : t_grid(0);
      ci.ci_upper = last < grid - 1 ? crossing(last, last + 1) : t_grid(grid - 1);
    }

    // Weight ESS at the grid point carrying the most null mass.
    Eigen::Index mode = 0;
    (log_w.array() - t_grid.array().square() / (2.0 * var)).maxCoeff(&mode);
    const Eigen::VectorXd lr = log_ratio.col(mode);
    const Eigen::VectorXd w = (lr.array() - lr.maxCoeff()).exp();
    ci.ess = w.sum() * w.sum() / w.squaredNorm();
    ci.reliable = ci.ess >= options.min_ess;
    out.push_back(ci);
  }
  return out;
}

std::vector<CoordinateInference> naive_inference(const SelectionEvent& ev, double level) {
  const double z = special::normal_quantile(0.5 + 0.5 * level);
  std::vector<CoordinateInference> out;
  for (int j = 0; j < ev.active_size(); ++j) {
    CoordinateInference ci;
    ci.variable = ev.active[j];
    ci.estimate = ev.data(j);
    ci.std_error = std::sqrt(ev.data_cov(j, j));
    ci.pvalue = 2.0 * special::normal_cdf(-std::abs(ci.estimate) / ci.std_error);
    ci.ci_lower = ci.estimate - z * ci.std_error;
    ci.ci_upper = ci.estimate + z * ci.std_error;
    ci.ess = std::numeric_limits<double>::infinity();
    out.push_back(ci);
  }
  return out;
}

SimulatedData simulate_equicorrelated(int n, int p, double rho, std::uint64_t seed) {
  if (n < 2 || p < 1) throw std::invalid_argument("simulate_equicorrelated: need n >= 2 and p >= 1");
  if (!(rho >= 0 && rho < 1)) throw std::invalid_argument("simulate_equicorrelated: rho must lie in [0, 1)");
  Rng rng(seed);
  Rng design_rng = rng.split(0);
  Rng response_rng = rng.split(1);
  SimulatedData out{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
  // x = sqrt(rho) z0 + sqrt(1 - rho) z has unit variance and correlation rho.
  const double shared = std::sqrt(rho);
  const double own = std::sqrt(1.0 - rho);
  for (int i = 0; i < n; ++i) {
    const double common = design_rng.normal();
    for (int j = 0; j < p; ++j) out.X(i, j) = shared * common + own * design_rng.normal();
  }
  for (int j = 0; j < p; ++j) out.X.col(j).normalize();
  for (int i = 0; i < n; ++i) out.y(i) = response_rng.normal();
  return out;
}

Scales default_scales(const Eigen::VectorXd& y) {
  if (y.size() < 2) throw std::invalid_argument("default_scales: need at least two responses");
  const double mean = y.mean();
  const double sigma = std::sqrt((y.array() - mean).square().mean());
  if (!(sigma > 0)) throw NumericalError("default_scales: degenerate scale (constant response)");
  return {sigma * sigma / std::sqrt(static_cast<double>(y.size())), 0.5 * sigma};
}

}  // namespace irf::selective
