#include "irf/distributions.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irf/arrival_time.hpp"
#include "irf/special_functions.hpp"

namespace irf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd vec1(double v) { return Eigen::VectorXd::Constant(1, v); }

Potential scalar_potential(DomainSet domain, std::function<double(double)> u,
                           std::function<double(double)> du, bool log_concave) {
  return Potential(
      std::move(domain), [u](const Eigen::VectorXd& x) { return u(x(0)); },
      [du](const Eigen::VectorXd& x) { return vec1(du(x(0))); }, log_concave);
}

double log_add_exp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double inset(double bound, int side) { return bound + side * 1e-12 * std::max(1.0, std::abs(bound)); }

MonotoneDecomposition gaussian_split(double mean, double variance, double lower, double upper) {
  const double sd = std::sqrt(variance);
  MonotonePiece inc{
      [=](double x) { return x >= mean ? 0.5 * (x - mean) * (x - mean) / variance : 0.0; },
      [=](double y) { return mean + sd * std::sqrt(2.0 * std::max(0.0, y)); },
      [=](double x) { return x > mean ? (x - mean) / variance : 0.0; }};
  MonotonePiece dec{
      [=](double x) { return x <= mean ? 0.5 * (x - mean) * (x - mean) / variance : 0.0; },
      [=](double y) { return mean - sd * std::sqrt(2.0 * std::max(0.0, y)); },
      [=](double x) { return x < mean ? (x - mean) / variance : 0.0; }};
  return {std::move(inc), std::move(dec), lower, upper};
}

std::vector<double> parse_numbers(std::string_view rest, std::string_view name) {
  std::vector<double> out;
  while (!rest.empty()) {
    const auto colon = rest.find(':');
    const std::string_view token = rest.substr(0, colon);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      throw std::invalid_argument("target '" + std::string(name) + "': bad number '" + std::string(token) + "'");
    }
    out.push_back(value);
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  return out;
}

std::string format_name(std::string_view family, std::initializer_list<double> params) {
  std::string out(family);
  for (double p : params) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), p);
    out += ':';
    out.append(buf, ptr);
  }
  return out;
}

}  // namespace

ScalarFn scalar_value(const Potential& p) {
  return [&p](double x) { return p.value_unchecked(vec1(x)); };
}

ScalarFn scalar_slope(const Potential& p) {
  return [&p](double x) { return p.gradient_unchecked(vec1(x))(0); };
}

TargetSpec make_uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform: need a < b");
  auto zero = [](double) { return 0.0; };
  TargetSpec t{format_name("uniform", {a, b}),
               scalar_potential(DomainSet::interval(a, b), zero, zero, true),
               MonotoneDecomposition({zero, {}, zero}, {zero, {}, zero}, a, b),
               [=](double x) { return x <= a ? 0.0 : (x >= b ? 1.0 : (x - a) / (b - a)); },
               [=](double x) { return (x > a && x < b) ? 1.0 / (b - a) : 0.0; },
               [=](double x, int v, double) { return v > 0 ? b - x : x - a; },
               a,
               b};
  return t;
}

TargetSpec make_gaussian(double mean, double variance) {
  if (!(variance > 0)) throw std::invalid_argument("gaussian: variance must be positive");
  const double sd = std::sqrt(variance);
  TargetSpec t{format_name("gaussian", {mean, variance}),
               scalar_potential(
                   DomainSet::full_space(1), [=](double x) { return 0.5 * (x - mean) * (x - mean) / variance; },
                   [=](double x) { return (x - mean) / variance; }, true),
               gaussian_split(mean, variance, -kInf, kInf),
               [=](double x) { return special::normal_cdf((x - mean) / sd); },
               [=](double x) { return special::normal_pdf((x - mean) / sd) / sd; },
               [=](double x, int v, double big_v) {
                 const double thr = -std::log(big_v);
                 const double lead = (mean - x) / v;
                 if (lead >= 0) return lead + std::sqrt(2.0 * variance * thr) / std::abs(v);
                 return lead + std::sqrt((x - mean) * (x - mean) / (v * v) + 2.0 * variance * thr / (v * v));
               },
               mean - 8.0 * sd,
               mean + 8.0 * sd};
  return t;
}

TargetSpec make_standard_gaussian(int dim) {
  if (dim < 1) throw std::invalid_argument("mvn: dimension must be >= 1");
  Potential p(
      DomainSet::full_space(dim), [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); },
      [](const Eigen::VectorXd& x) { return x; }, true);
  TargetSpec t{"mvn:" + std::to_string(dim),
               std::move(p),
               std::nullopt,
               [](double x) { return special::normal_cdf(x); },
               dim == 1 ? ScalarFn([](double x) { return special::normal_pdf(x); }) : ScalarFn{},
               {},
               -8.0,
               8.0};
  return t;
}

BetaRegime beta_regime(double alpha, double beta) {
  if (alpha > 1 && beta > 1) return BetaRegime::Convex;
  if (alpha < 1 && beta < 1) return BetaRegime::Concave;
  if (alpha <= 1 && beta >= 1) return BetaRegime::Increasing;
  return BetaRegime::Decreasing;
}

TargetSpec make_beta(double alpha, double beta) {
  if (!(alpha > 0 && beta > 0)) throw std::invalid_argument("beta: shape parameters must be positive");
  const double am1 = alpha - 1.0;
  const double bm1 = beta - 1.0;
  const double log_norm = special::log_beta(alpha, beta);
  auto u = [=](double x) { return -am1 * std::log(x) - bm1 * std::log1p(-x); };
  auto du = [=](double x) { return -am1 / x + bm1 / (1.0 - x); };

  // -(alpha-1) log x is increasing when alpha < 1, -(beta-1) log(1-x) when beta > 1.
  auto left_term = [=](double x) { return -am1 * std::log(x); };
  auto right_term = [=](double x) { return -bm1 * std::log1p(-x); };
  auto left_slope = [=](double x) { return -am1 / x; };
  auto right_slope = [=](double x) { return bm1 / (1.0 - x); };
  auto zero = [](double) { return 0.0; };

  std::vector<ScalarFn> inc_f, inc_d, dec_f, dec_d;
  ScalarFn inc_inv, dec_inv;
  if (am1 < 0) {
    inc_f.push_back(left_term);
    inc_d.push_back(left_slope);
    inc_inv = [=](double y) { return std::exp(y / (1.0 - alpha)); };
  } else if (am1 > 0) {
    dec_f.push_back(left_term);
    dec_d.push_back(left_slope);
    dec_inv = [=](double y) { return std::exp(-y / am1); };
  }
  if (bm1 > 0) {
    inc_f.push_back(right_term);
    inc_d.push_back(right_slope);
    inc_inv = inc_f.size() == 1 ? ScalarFn([=](double y) { return 1.0 - std::exp(-y / bm1); }) : ScalarFn{};
  } else if (bm1 < 0) {
    dec_f.push_back(right_term);
    dec_d.push_back(right_slope);
    dec_inv = dec_f.size() == 1 ? ScalarFn([=](double y) { return 1.0 - std::exp(y / (1.0 - beta)); }) : ScalarFn{};
  }
  auto combine = [&](const std::vector<ScalarFn>& fs) -> ScalarFn {
    if (fs.empty()) return zero;
    if (fs.size() == 1) return fs.front();
    return [fs](double x) { return fs[0](x) + fs[1](x); };
  };
  MonotonePiece inc{combine(inc_f), inc_inv, combine(inc_d)};
  MonotonePiece dec{combine(dec_f), dec_inv, combine(dec_d)};

  const bool log_concave = alpha >= 1 && beta >= 1;
  TargetSpec t{format_name("beta", {alpha, beta}),
               scalar_potential(DomainSet::interval(0.0, 1.0), u, du, log_concave),
               MonotoneDecomposition(std::move(inc), std::move(dec), 0.0, 1.0),
               [=](double x) { return special::incomplete_beta(alpha, beta, x); },
               [=](double x) { return (x > 0 && x < 1) ? std::exp(-u(x) - log_norm) : 0.0; },
               [=](double x, int v, double big_v) { return beta_tau_regime(alpha, beta, x, v, big_v); },
               0.0,
               1.0};
  return t;
}

TargetSpec make_mixture(double w1, double mu1, double mu2, double variance) {
  if (!(w1 > 0 && w1 < 1)) throw std::invalid_argument("mixture: weight must lie in (0, 1)");
  if (!(mu1 < mu2)) throw std::invalid_argument("mixture: need mu1 < mu2");
  if (!(variance > 0)) throw std::invalid_argument("mixture: variance must be positive");
  const double w2 = 1.0 - w1;
  const double sd = std::sqrt(variance);
  const double log_w1 = std::log(w1);
  const double log_w2 = std::log(w2);
  const double tilt = (mu2 - mu1) / variance;
  // a(x) = (2x(mu2 - mu1) + mu1^2 - mu2^2) / (2 variance)
  auto a = [=](double x) { return (2.0 * x * (mu2 - mu1) + mu1 * mu1 - mu2 * mu2) / (2.0 * variance); };
  auto log_mix = [=](double x) { return log_add_exp(log_w1, log_w2 + a(x)); };
  auto log_mix_slope = [=](double x) {
    const double z = log_w2 + a(x) - log_w1;
    return tilt / (1.0 + std::exp(-z));
  };
  auto u = [=](double x) { return 0.5 * (x - mu1) * (x - mu1) / variance - log_mix(x); };
  auto du = [=](double x) { return (x - mu1) / variance - log_mix_slope(x); };

  MonotonePiece inc{[=](double x) { return x > mu1 ? 0.5 * (x - mu1) * (x - mu1) / variance : 0.0; },
                    [=](double y) { return mu1 + sd * std::sqrt(2.0 * std::max(0.0, y)); },
                    [=](double x) { return x > mu1 ? (x - mu1) / variance : 0.0; }};
  MonotonePiece dec{
      [=](double x) { return (x < mu1 ? 0.5 * (x - mu1) * (x - mu1) / variance : 0.0) - log_mix(x); },
      {},
      [=](double x) { return (x < mu1 ? (x - mu1) / variance : 0.0) - log_mix_slope(x); }};

  TargetSpec t{format_name("mixture", {w1, mu1, mu2, variance}),
               scalar_potential(DomainSet::full_space(1), u, du, false),
               MonotoneDecomposition(std::move(inc), std::move(dec), -kInf, kInf),
               [=](double x) {
                 return w1 * special::normal_cdf((x - mu1) / sd) + w2 * special::normal_cdf((x - mu2) / sd);
               },
               [=](double x) {
                 return w1 * special::normal_pdf((x - mu1) / sd) / sd + w2 * special::normal_pdf((x - mu2) / sd) / sd;
               },
               {},
               mu1 - 8.0 * sd,
               mu2 + 8.0 * sd};
  return t;
}

TargetSpec make_truncated_gaussian(double mean, double variance, double lo, double hi) {
  if (!(variance > 0)) throw std::invalid_argument("truncnorm: variance must be positive");
  if (!(lo < hi)) throw std::invalid_argument("truncnorm: need lo < hi");
  const double sd = std::sqrt(variance);
  const double cdf_lo = special::normal_cdf((lo - mean) / sd);
  const double mass = special::normal_cdf((hi - mean) / sd) - cdf_lo;
  if (!(mass > 0)) throw std::invalid_argument("truncnorm: truncation interval carries no mass");
  TargetSpec t{format_name("truncnorm", {mean, variance, lo, hi}),
               scalar_potential(
                   DomainSet::interval(lo, hi), [=](double x) { return 0.5 * (x - mean) * (x - mean) / variance; },
                   [=](double x) { return (x - mean) / variance; }, true),
               gaussian_split(mean, variance, lo, hi),
               [=](double x) {
                 if (x <= lo) return 0.0;
                 if (x >= hi) return 1.0;
                 return (special::normal_cdf((x - mean) / sd) - cdf_lo) / mass;
               },
               [=](double x) { return (x > lo && x < hi) ? special::normal_pdf((x - mean) / sd) / (sd * mass) : 0.0; },
               {},
               lo,
               hi};
  return t;
}

TargetSpec make_target(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view family = spec.substr(0, colon);
  const std::vector<double> args =
      colon == std::string_view::npos ? std::vector<double>{} : parse_numbers(spec.substr(colon + 1), spec);
  auto need = [&](std::size_t n) {
    if (args.size() != n) {
      throw std::invalid_argument("target '" + std::string(spec) + "' expects " + std::to_string(n) + " parameters");
    }
  };
  if (family == "uniform") {
    need(2);
    return make_uniform(args[0], args[1]);
  }
  if (family == "gaussian") {
    need(2);
    return make_gaussian(args[0], args[1]);
  }
  if (family == "mvn") {
    need(1);
    const auto d = static_cast<int>(args[0]);
    if (d != args[0]) throw std::invalid_argument("mvn: dimension must be an integer");
    return make_standard_gaussian(d);
  }
  if (family == "beta") {
    need(2);
    return make_beta(args[0], args[1]);
  }
  if (family == "mixture") {
    need(4);
    return make_mixture(args[0], args[1], args[2], args[3]);
  }
  if (family == "truncnorm") {
    need(4);
    return make_truncated_gaussian(args[0], args[1], args[2], args[3]);
  }
  throw std::invalid_argument("unknown target '" + std::string(spec) + "'");
}

std::vector<std::string> zoo_names() {
  return {"uniform:0:1",        "gaussian:0:1",  "beta:2:2",         "beta:3:2",
          "beta:0.5:0.5",       "beta:0.5:2",    "beta:2:0.5",       "mixture:0.5:0:4:1",
          "truncnorm:0:1:1:3"};
}

double beta_tau_regime(double alpha, double beta, double x, int direction, double v_uniform) {
  if (!(x > 0 && x < 1)) throw std::domain_error("beta_tau_regime: x must lie in (0, 1)");
  if (direction != 1 && direction != -1) throw std::invalid_argument("beta_tau_regime: direction must be +-1");
  if (!(v_uniform > 0 && v_uniform < 1)) throw std::invalid_argument("beta_tau_regime: V must lie in (0, 1)");
  const double thr = -std::log(v_uniform);
  auto u = [=](double z) { return -(alpha - 1.0) * std::log(z) - (beta - 1.0) * std::log1p(-z); };
  const double wall = direction > 0 ? 1.0 - x : x;
  const double wall_eval = direction > 0 ? inset(1.0, -1) - x : x - inset(0.0, +1);
  // Potential rise from position x + direction * s0 to x + direction * t.
  auto rise_from = [&](double s0) {
    const double base = u(x + direction * s0);
    return ScalarFn([=](double t) { return u(x + direction * t) - base; });
  };
  auto solve = [&](double s0, double s1) {
    const ScalarFn r = rise_from(s0);
    if (r(s1) < thr) return wall;
    return detail::bisect_increasing(r, s0, s1, thr);
  };

  switch (beta_regime(alpha, beta)) {
    case BetaRegime::Convex: {
      const double mode = (alpha - 1.0) / (alpha + beta - 2.0);
      const double t_star = std::max(0.0, direction * (mode - x));
      return solve(t_star, wall_eval);
    }
    case BetaRegime::Concave: {
      const double antimode = (alpha - 1.0) / (alpha + beta - 2.0);
      const double t_star = std::max(0.0, direction * (antimode - x));
      if (t_star > 0 && u(x + direction * t_star) - u(x) >= thr) return solve(0.0, t_star);
      return wall;
    }
    case BetaRegime::Increasing:
      return direction > 0 ? solve(0.0, wall_eval) : wall;
    case BetaRegime::Decreasing:
      return direction > 0 ? wall : solve(0.0, wall_eval);
  }
  return wall;
}

}  // namespace irf
