#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "irf/chain.hpp"
#include "irf/potential.hpp"
#include "irf/rng.hpp"

namespace irf::selective {

enum class RandomizationKind { Gaussian, Laplace };

std::string to_string(RandomizationKind kind);
RandomizationKind parse_randomization(const std::string& name);

/// Law G of the randomization vector omega, i.i.d. coordinates with scale s.
struct Randomization {
  RandomizationKind kind = RandomizationKind::Gaussian;
  double scale = 1.0;

  /// -log g(w) up to an additive constant.
  [[nodiscard]] double neg_log_density(const Eigen::VectorXd& w) const;
  /// Subgradient of -log g; sign(0) = 0 for the Laplace kink.
  [[nodiscard]] Eigen::VectorXd neg_log_density_gradient(const Eigen::VectorXd& w) const;
  [[nodiscard]] Eigen::VectorXd sample(Rng& rng, Eigen::Index dim) const;
};

/// Randomized LASSO: 1/2 |y - X b|^2 + lam |b|_1 + (eps/2) |b|^2 - omega^T b.
struct SelectiveProblem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  double lasso_penalty = 1.0;
  double ridge = 0.0;
  Randomization randomization;
  Eigen::VectorXd omega;
};

/// Selected support and everything inference treats as fixed given it.
/// Coordinates are ordered active-first: [E; -E].
struct SelectionEvent {
  std::vector<int> active;
  std::vector<int> inactive;
  Eigen::VectorXd signs;  ///< s_E
  double lasso_penalty = 0.0;
  double sigma2 = 0.0;    ///< plug-in noise variance
  /// D = (beta-bar_E, X_{-E}^T (y - X_E beta-bar_E)).
  Eigen::VectorXd data;
  Eigen::MatrixXd data_cov;
  /// omega = -data_map D + opt_map o + offset, with o = (beta_E, u_{-E}).
  Eigen::MatrixXd data_map;
  Eigen::MatrixXd opt_map;
  Eigen::VectorXd offset;
  /// (beta-hat_E, u_{-E}) read off the solve.
  Eigen::VectorXd observed_opt;

  [[nodiscard]] int active_size() const { return static_cast<int>(active.size()); }
  [[nodiscard]] int dim() const { return static_cast<int>(active.size() + inactive.size()); }
  /// omega permuted to active-first order.
  [[nodiscard]] Eigen::VectorXd permute(const Eigen::VectorXd& full) const;
};

struct OptVariables {
  Eigen::VectorXd beta_active;
  Eigen::VectorXd u_inactive;

  [[nodiscard]] Eigen::VectorXd stacked() const;
  static OptVariables from_stacked(const Eigen::VectorXd& o, int active_size);
};

struct LassoFit {
  Eigen::VectorXd beta;
  SelectionEvent event;
  int passes = 0;
  double kkt_residual = 0.0;
};

/// Cyclic coordinate descent with soft thresholding; stops when the largest
/// coordinate change falls below 1e-10. Throws NumericalError after 50,000 passes.
LassoFit solve_randomized_lasso(const SelectiveProblem& prob);

/// Infinity-norm violation of the subgradient optimality conditions at beta.
double kkt_residual(const SelectiveProblem& prob, const Eigen::VectorXd& beta);

/// omega (active-first order) reconstructed from the KKT map at the observed D.
Eigen::VectorXd kkt_reconstruct(const SelectionEvent& ev, const OptVariables& opt);

/// s_E-orthant x (-lam, lam)-cube.
DomainSet selective_domain(const SelectionEvent& ev);

/// U(o) = -log g(omega(D_obs, o)) on selective_domain(ev); log-concave.
Potential selective_potential(const SelectionEvent& ev, const Randomization& randomization);

/// Hit-and-run chain over the optimization variables started at the observed values.
SampleBatch sample_opt_variables(const SelectionEvent& ev, const SelectiveProblem& prob, std::uint64_t steps,
                                 std::uint64_t seed);

/// Projected Langevin chain over the same density (baseline).
SampleBatch sample_opt_variables_langevin(const SelectionEvent& ev, const SelectiveProblem& prob,
                                          std::uint64_t steps, std::uint64_t seed, double step_size = 0.0);

struct CoordinateInference {
  int variable = 0;       ///< column index in X
  double estimate = 0.0;  ///< beta-bar_{E,j}
  double std_error = 0.0;
  double pvalue = 1.0;    ///< two-sided, null beta*_j = 0
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  double ess = 0.0;       ///< importance-weight ESS near the null
  bool reliable = true;   ///< false when ess < 50

  [[nodiscard]] bool covers(double value) const { return ci_lower <= value && value <= ci_upper; }
};

struct InferenceOptions {
  double level = 0.9;
  int grid_points = 201;
  double grid_halfwidth_se = 6.0;
  double min_ess = 50.0;
};

/// Selective p-values and intervals by importance reweighting of the sampled
/// optimization variables along the nuisance-preserving direction of each
/// beta-bar_{E,j}.
std::vector<CoordinateInference> pvalues_and_intervals(const SampleBatch& batch, const SelectionEvent& ev,
                                                       const SelectiveProblem& prob,
                                                       const InferenceOptions& options = {});

/// Normal-quantile inference ignoring selection.
std::vector<CoordinateInference> naive_inference(const SelectionEvent& ev, double level = 0.9);

struct SimulatedData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

/// Rows i.i.d. N(0, Sigma) with unit diagonal and off-diagonal rho; columns
/// scaled to unit norm; y ~ N(0, I_n) independent of X.
SimulatedData simulate_equicorrelated(int n, int p, double rho, std::uint64_t seed);

struct Scales {
  double ridge;
  double randomization_scale;
};

/// eps = sigma-hat^2 / sqrt(n), s = sigma-hat / 2 with sigma-hat the
/// empirical (population) standard deviation of y.
Scales default_scales(const Eigen::VectorXd& y);

}  // namespace irf::selective
