#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "irf/errors.hpp"
#include "irf/selective.hpp"

namespace irf::selective {

namespace {

constexpr int kMaxPasses = 50000;
constexpr double kTolerance = 1e-10;
constexpr double kSupportThreshold = 1e-10;

double soft_threshold(double z, double lam) {
  if (z > lam) return z - lam;
  if (z < -lam) return z + lam;
  return 0.0;
}

double population_variance(const Eigen::VectorXd& y) {
  const double mean = y.mean();
  return (y.array() - mean).square().mean();
}

// Fills D, Sigma_D and the KKT reconstruction matrices for a fixed support.
void build_event(const SelectiveProblem& prob, const Eigen::VectorXd& beta, SelectionEvent& ev) {
  const Eigen::MatrixXd& X = prob.X;
  const int p = static_cast<int>(X.cols());
  const int k = ev.active_size();
  const int q = p - k;

  Eigen::MatrixXd XE(X.rows(), k);
  Eigen::MatrixXd XI(X.rows(), q);
  for (int a = 0; a < k; ++a) XE.col(a) = X.col(ev.active[a]);
  for (int b = 0; b < q; ++b) XI.col(b) = X.col(ev.inactive[b]);

  const Eigen::MatrixXd gram_ee = XE.transpose() * XE;
  const Eigen::MatrixXd gram_ie = XI.transpose() * XE;
  const Eigen::LDLT<Eigen::MatrixXd> gram_solver(gram_ee);
  const Eigen::VectorXd beta_bar = gram_solver.solve(XE.transpose() * prob.y);
  const Eigen::VectorXd residual = prob.y - XE * beta_bar;

  ev.data.resize(p);
  ev.data.head(k) = beta_bar;
  ev.data.tail(q) = XI.transpose() * residual;

  // Sandwich covariance with E fixed: beta-bar and the inactive score are uncorrelated.
  ev.sigma2 = population_variance(prob.y);
  ev.data_cov = Eigen::MatrixXd::Zero(p, p);
  ev.data_cov.topLeftCorner(k, k) = ev.sigma2 * gram_solver.solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd projected = XI - XE * gram_solver.solve(gram_ie.transpose());
  ev.data_cov.bottomRightCorner(q, q) = ev.sigma2 * (XI.transpose() * projected);

  ev.data_map = Eigen::MatrixXd::Zero(p, p);
  ev.data_map.topLeftCorner(k, k) = gram_ee;
  ev.data_map.bottomLeftCorner(q, k) = gram_ie;
  ev.data_map.bottomRightCorner(q, q).setIdentity();

  ev.opt_map = Eigen::MatrixXd::Zero(p, p);
  ev.opt_map.topLeftCorner(k, k) = gram_ee + prob.ridge * Eigen::MatrixXd::Identity(k, k);
  ev.opt_map.bottomLeftCorner(q, k) = gram_ie;
  ev.opt_map.bottomRightCorner(q, q).setIdentity();

  ev.offset = Eigen::VectorXd::Zero(p);
  ev.offset.head(k) = prob.lasso_penalty * ev.signs;

  // u_{-E} = omega_{-E} + X_{-E}^T (y - X_E beta-hat_E)
  Eigen::VectorXd beta_e(k);
  for (int a = 0; a < k; ++a) beta_e(a) = beta(ev.active[a]);
  Eigen::VectorXd omega_i(q);
  for (int b = 0; b < q; ++b) omega_i(b) = prob.omega(ev.inactive[b]);
  ev.observed_opt.resize(p);
  ev.observed_opt.head(k) = beta_e;
  ev.observed_opt.tail(q) = omega_i + XI.transpose() * (prob.y - XE * beta_e);
}

}  // namespace

std::string to_string(RandomizationKind kind) {
  return kind == RandomizationKind::Gaussian ? "gaussian" : "laplace";
}

RandomizationKind parse_randomization(const std::string& name) {
  if (name == "gaussian") return RandomizationKind::Gaussian;
  if (name == "laplace") return RandomizationKind::Laplace;
  throw std::invalid_argument("unknown randomization '" + name + "' (expected gaussian or laplace)");
}

double Randomization::neg_log_density(const Eigen::VectorXd& w) const {
  if (kind == RandomizationKind::Gaussian) return 0.5 * w.squaredNorm() / (scale * scale);
  return w.lpNorm<1>() / scale;
}

Eigen::VectorXd Randomization::neg_log_density_gradient(const Eigen::VectorXd& w) const {
  if (kind == RandomizationKind::Gaussian) return w / (scale * scale);
  return w.unaryExpr([](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }) / scale;
}

Eigen::VectorXd Randomization::sample(Rng& rng, Eigen::Index dim) const {
  Eigen::VectorXd w(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    w(i) = scale * (kind == RandomizationKind::Gaussian ? rng.normal() : rng.laplace());
  }
  return w;
}

Eigen::VectorXd SelectionEvent::permute(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(dim());
  int i = 0;
  for (int j : active) out(i++) = full(j);
  for (int j : inactive) out(i++) = full(j);
  return out;
}

Eigen::VectorXd OptVariables::stacked() const {
  Eigen::VectorXd o(beta_active.size() + u_inactive.size());
  o << beta_active, u_inactive;
  return o;
}

OptVariables OptVariables::from_stacked(const Eigen::VectorXd& o, int active_size) {
  return {o.head(active_size), o.tail(o.size() - active_size)};
}

double kkt_residual(const SelectiveProblem& prob, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd grad =
      prob.X.transpose() * (prob.X * beta - prob.y) + prob.ridge * beta - prob.omega;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (std::abs(beta(j)) > kSupportThreshold) {
      worst = std::max(worst, std::abs(grad(j) + prob.lasso_penalty * (beta(j) > 0 ? 1.0 : -1.0)));
    } else {
      worst = std::max(worst, std::abs(grad(j)) - prob.lasso_penalty);
    }
  }
  return std::max(worst, 0.0);
}

LassoFit solve_randomized_lasso(const SelectiveProblem& prob) {
  const Eigen::Index n = prob.X.rows();
  const Eigen::Index p = prob.X.cols();
  if (n < 1 || p < 1) throw std::invalid_argument("solve_randomized_lasso: empty design");
  if (prob.y.size() != n || prob.omega.size() != p) {
    throw std::invalid_argument("solve_randomized_lasso: dimension mismatch");
  }
  if (!(prob.lasso_penalty > 0) || !(prob.ridge > 0)) {
    throw std::invalid_argument("solve_randomized_lasso: penalty and ridge must be positive");
  }

  const Eigen::MatrixXd gram = prob.X.transpose() * prob.X;
  const Eigen::VectorXd linear = prob.X.transpose() * prob.y + prob.omega;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd gram_beta = Eigen::VectorXd::Zero(p);

  LassoFit fit;
  for (fit.passes = 1; fit.passes <= kMaxPasses; ++fit.passes) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double z = linear(j) - gram_beta(j) + gram(j, j) * beta(j);
      const double updated = soft_threshold(z, prob.lasso_penalty) / (gram(j, j) + prob.ridge);
      const double delta = updated - beta(j);
      if (delta != 0.0) {
        gram_beta += delta * gram.col(j);
        beta(j) = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (max_change < kTolerance) break;
  }
  if (fit.passes > kMaxPasses) throw NumericalError("solve_randomized_lasso: coordinate descent did not converge");

  fit.beta = beta;
  fit.kkt_residual = kkt_residual(prob, beta);
  SelectionEvent& ev = fit.event;
  ev.lasso_penalty = prob.lasso_penalty;
  for (int j = 0; j < static_cast<int>(p); ++j) {
    if (std::abs(beta(j)) > kSupportThreshold) {
      ev.active.push_back(j);
    } else {
      ev.inactive.push_back(j);
    }
  }
  ev.signs.resize(ev.active_size());
  for (int a = 0; a < ev.active_size(); ++a) ev.signs(a) = beta(ev.active[a]) > 0 ? 1.0 : -1.0;
  build_event(prob, beta, ev);
  return fit;
}

Eigen::VectorXd kkt_reconstruct(const SelectionEvent& ev, const OptVariables& opt) {
  if (opt.beta_active.size() != ev.active_size() ||
      opt.u_inactive.size() != static_cast<Eigen::Index>(ev.inactive.size())) {
    throw std::invalid_argument("kkt_reconstruct: optimization variables do not match the event");
  }
  return -ev.data_map * ev.data + ev.opt_map * opt.stacked() + ev.offset;
}

}  // namespace irf::selective
