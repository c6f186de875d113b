#include <doctest.h>

#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "irf/errors.hpp"
#include "irf/arrival_time.hpp"
#include "irf/diagnostics.hpp"
#include "irf/distributions.hpp"
#include "irf/hit_and_run.hpp"
#include "irf/special_functions.hpp"
#include "oracles.hpp"

using Vec = Eigen::VectorXd;

namespace {
Vec v1(double a) { return Vec::Constant(1, a); }
}  // namespace

TEST_CASE("special functions against Boost") {
  for (double a : {0.5, 1.0, 2.0, 3.0, 7.5}) {
    for (double b : {0.5, 1.0, 2.0, 4.0}) {
      for (double x : {1e-6, 0.01, 0.2, 0.5, 0.77, 0.999}) {
        CHECK(std::abs(irf::special::incomplete_beta(a, b, x) - boost::math::ibeta(a, b, x)) < 1e-12);
      }
      CHECK(std::abs(irf::special::log_beta(a, b) - std::log(boost::math::beta(a, b))) < 1e-12);
    }
  }
  const boost::math::normal n01;
  for (double p : {1e-10, 1e-4, 0.02, 0.3, 0.5, 0.9, 0.975, 1 - 1e-8}) {
    CHECK(std::abs(irf::special::normal_quantile(p) - boost::math::quantile(n01, p)) < 1e-9);
  }
  for (double x : {-9.0, -2.0, 0.0, 0.4, 3.0}) {
    CHECK(std::abs(irf::special::normal_cdf(x) - boost::math::cdf(n01, x)) < 1e-15);
    CHECK(std::abs(irf::special::normal_pdf(x) - boost::math::pdf(n01, x)) < 1e-15);
  }
}

TEST_CASE("Beta potential") {
  const auto b = irf::make_beta(2.0, 2.0);
  CHECK(std::abs(b.potential.gradient(v1(0.5))(0)) < 1e-15);
  for (double x : {0.1, 0.3, 0.9}) {
    CHECK(b.potential.gradient(v1(x))(0) == doctest::Approx(-1.0 / x + 1.0 / (1.0 - x)).epsilon(1e-14));
  }
  CHECK(b.potential.log_concave());
  CHECK_FALSE(irf::make_beta(0.5, 0.5).potential.log_concave());
  CHECK(irf::beta_regime(2, 2) == irf::BetaRegime::Convex);
  CHECK(irf::beta_regime(0.5, 0.5) == irf::BetaRegime::Concave);
  CHECK(irf::beta_regime(0.5, 2) == irf::BetaRegime::Increasing);
  CHECK(irf::beta_regime(2, 0.5) == irf::BetaRegime::Decreasing);
}

TEST_CASE("mixture split matches the closed forms") {
  const auto m = irf::make_mixture(0.5, 0.0, 4.0, 1.0);
  const auto& dec = *m.decomposition;
  double prev = INFINITY;
  for (int i = 0; i <= 200; ++i) {
    const double x = -4.0 + 12.0 * i / 200.0;
    const double u1 = x > 0.0 ? 0.5 * x * x : 0.0;
    CHECK(dec.u1(x) == doctest::Approx(u1).epsilon(1e-12));
    CHECK(dec.u2(x) <= prev + 1e-12);
    prev = dec.u2(x);
  }
  CHECK_FALSE(m.potential.log_concave());
}

TEST_CASE("Gaussian analytic tau equals the bisection oracle") {
  irf::Rng rng(31);
  const auto g = irf::make_gaussian(0.5, 2.0);
  int positive_case = 0;
  for (int k = 0; k < 100; ++k) {
    const double x = rng.uniform(-5, 5);
    const int v = rng.uniform_open() < 0.5 ? -1 : 1;
    const double V = rng.uniform_open();
    const double slope0 = v * (x - 0.5) / 2.0;
    positive_case += (0.5 - x) / v >= 0 ? 1 : 0;
    const double expected = oracle::first_crossing([&](double t) { return slope0 + t / 2.0; }, 30.0, -std::log(V));
    CHECK(std::abs(g.analytic_tau(x, v, V) - expected) < 1e-6);
  }
  CHECK(positive_case > 20);
  CHECK(positive_case < 80);
}

TEST_CASE("Beta regime tau") {
  SUBCASE("convex: oracle") {
    const double V = 0.7;
    const double expected = oracle::first_crossing([](double t) { return -1.0 / (0.5 + t) + 1.0 / (0.5 - t); },
                                                   0.5 - 1e-12, -std::log(V));
    CHECK(std::abs(irf::beta_tau_regime(2, 2, 0.5, 1, V) - expected) < 1e-6);
  }
  SUBCASE("concave: clamps to the wall when the hill is too low") {
    // U = 0.5 log x + 0.5 log(1 - x) peaks at the start, so nothing is climbed.
    CHECK(irf::beta_tau_regime(0.5, 0.5, 0.5, 1, 0.01) == doctest::Approx(0.5).epsilon(1e-14));
    // From 0.2 the climb to 0.5 is worth U(0.5) - U(0.2) = 0.5 log(0.25 / 0.16).
    const double rise = 0.5 * std::log(0.25 / 0.16);
    CHECK(irf::beta_tau_regime(0.5, 0.5, 0.2, 1, std::exp(-rise) * 0.9) == doctest::Approx(0.8).epsilon(1e-14));
    const double V = std::exp(-0.5 * rise);
    const double expected = oracle::first_crossing([](double t) { return 0.5 / (0.2 + t) - 0.5 / (0.8 - t); },
                                                   0.8 - 1e-12, -std::log(V));
    CHECK(std::abs(irf::beta_tau_regime(0.5, 0.5, 0.2, 1, V) - expected) < 1e-6);
  }
  SUBCASE("increasing potential: moving down always reaches the wall") {
    CHECK(irf::beta_tau_regime(0.5, 2, 0.3, -1, 0.4) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(irf::beta_tau_regime(2, 0.5, 0.3, 1, 0.4) == doctest::Approx(0.7).epsilon(1e-14));
  }
  SUBCASE("regime rule matches the general solver") {
    irf::Rng rng(8);
    for (const auto& [a, b] : std::vector<std::pair<double, double>>{{2, 2}, {3, 2}, {0.5, 0.5}, {0.5, 2}, {2, 0.5}}) {
      const auto t = irf::make_beta(a, b);
      for (int k = 0; k < 40; ++k) {
        const double x = rng.uniform(0.02, 0.98);
        const int v = rng.uniform_open() < 0.5 ? -1 : 1;
        const double V = rng.uniform_open();
        const auto line = irf::restrict_to_line(t.potential, v1(x), v1(v));
        const double general = irf::solve_arrival(line, -std::log(V)).tau;
        CHECK(std::abs(irf::beta_tau_regime(a, b, x, v, V) - general) < 1e-9);
        CHECK(std::abs(t.analytic_tau(x, v, V) - general) < 1e-9);
      }
    }
  }
}

TEST_CASE("reference CDFs are consistent with the densities") {
  for (const auto& name : irf::zoo_names()) {
    CAPTURE(name);
    const auto t = irf::make_target(name);
    const double lo = t.support_lower;
    const double hi = t.support_upper;
    CHECK(t.cdf(lo - 1.0) <= 1e-12);
    CHECK(t.cdf(hi + 1.0) >= 1.0 - 1e-12);
    double prev = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double c = t.cdf(lo + (hi - lo) * i / 100.0);
      CHECK(c >= prev - 1e-15);
      prev = c;
    }
    // Integrate the density between two interior points with a fine Simpson rule.
    const double a = lo + 0.3 * (hi - lo);
    const double b = lo + 0.6 * (hi - lo);
    const int n = 20000;
    const double h = (b - a) / n;
    double s = t.density(a) + t.density(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * t.density(a + k * h);
    CHECK(std::abs(s * h / 3.0 - (t.cdf(b) - t.cdf(a))) < 1e-6);
    // The density is proportional to exp(-U).
    const double x1 = lo + 0.4 * (hi - lo);
    const double x2 = lo + 0.55 * (hi - lo);
    CHECK(std::log(t.density(x1) / t.density(x2)) ==
          doctest::Approx(t.potential.value(v1(x2)) - t.potential.value(v1(x1))).epsilon(1e-10));
  }
}

TEST_CASE("zoo gradients") {
  for (const auto& name : irf::zoo_names()) {
    CAPTURE(name);
    const auto t = irf::make_target(name);
    for (int i = 1; i < 10; ++i) {
      const double x = t.support_lower + (t.support_upper - t.support_lower) * i / 10.0;
      const auto g = irf::check_gradient(t.potential, v1(x));
      CHECK(g.valid);
      CHECK(g.max_relative_error < 1e-5);
    }
  }
}

TEST_CASE("mixture histogram is bimodal near 0 and 4") {
  const auto m = irf::make_target("mixture:0.5:0:4:1");
  const auto batch = irf::run(m.potential, {50000, 2, 1, 0, m.name}, v1(2.0));
  const Vec xs = batch.column(0);
  const auto h = irf::histogram(std::span<const double>(xs.data(), 50000), 40, -3.0, 7.0);
  std::size_t left = 0;
  std::size_t right = 20;
  for (std::size_t i = 0; i < 20; ++i) left = h.counts[i] > h.counts[left] ? i : left;
  for (std::size_t i = 20; i < 40; ++i) right = h.counts[i] > h.counts[right] ? i : right;
  // Bin width 0.25: the modal bin centre within 0.15 of the mode (plus half a bin).
  CHECK(std::abs(h.bin_center(left) - 0.0) < 0.15 + 0.125);
  CHECK(std::abs(h.bin_center(right) - 4.0) < 0.15 + 0.125);
  CHECK(h.counts[20] < h.counts[left] / 2);
}

TEST_CASE("registry parsing") {
  CHECK(irf::make_target("beta:0.5:0.5").name == "beta:0.5:0.5");
  CHECK(irf::make_target("mvn:3").dim() == 3);
  CHECK(irf::make_target("truncnorm:0:1:1:3").potential.domain().bounded());
  for (const char* bad : {"", "foo", "beta:2", "beta:-1:2", "gaussian:0:0", "uniform:1:0", "mixture:1.5:0:4:1",
                          "truncnorm:0:1:3:1", "beta:2:x", "mvn:0"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS((void)irf::make_target(bad), std::invalid_argument);
  }
  CHECK(irf::zoo_names().size() == 9);
}
