#include <doctest.h>

#include <cmath>

#include "irf/errors.hpp"
#include "irf/decomposition.hpp"
#include "irf/diagnostics.hpp"
#include "irf/distributions.hpp"
#include "oracles.hpp"

using Vec = Eigen::VectorXd;

namespace {
Vec v1(double a) { return Vec::Constant(1, a); }

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * (i + 0.5) / n;
  return out;
}

std::span<const double> as_span(const Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
}  // namespace

TEST_CASE("registered decompositions are valid splits") {
  for (const char* name : {"beta:2:2", "beta:3:2", "beta:0.5:0.5", "beta:0.5:2", "beta:2:0.5", "gaussian:1:2",
                           "mixture:0.5:0:4:1", "uniform:0:1"}) {
    CAPTURE(name);
    const auto t = irf::make_target(name);
    REQUIRE(t.decomposition.has_value());
    const auto& dec = *t.decomposition;
    const auto xs = grid(std::max(t.support_lower, dec.lower()), std::min(t.support_upper, dec.upper()), 201);
    double prev1 = -INFINITY;
    double prev2 = INFINITY;
    for (double x : xs) {
      const double u = t.potential.value(v1(x));
      CHECK(std::abs(dec.u1(x) + dec.u2(x) - u) <= 1e-10 * std::max(1.0, std::abs(u)));
      CHECK(dec.u1(x) >= prev1 - 1e-12);
      CHECK(dec.u2(x) <= prev2 + 1e-12);
      prev1 = dec.u1(x);
      prev2 = dec.u2(x);
    }
  }
}

TEST_CASE("inverses round-trip") {
  // Where a piece is strictly monotone the arrival from V inverts it: moving right
  // by tau raises U1 by the threshold, up to the inversion tolerance on the level.
  for (const char* name : {"beta:2:2", "beta:0.5:2", "gaussian:0:1", "mixture:0.5:0:4:1"}) {
    CAPTURE(name);
    const auto t = irf::make_target(name);
    const auto& dec = *t.decomposition;
    for (double x : grid(t.support_lower, t.support_upper, 40)) {
      if (!(x > dec.lower() && x < dec.upper())) continue;
      for (double thr : {0.05, 0.7, 2.0}) {
        const auto up = dec.arrival(x, 1, thr);
        if (!up.clamped && up.tau > 0) {
          const double level = dec.u1(x) + thr;
          CHECK(std::abs(dec.u1(x + up.tau) - level) <= 1e-10 * (1.0 + std::abs(level)));
        }
        const auto down = dec.arrival(x, -1, thr);
        if (!down.clamped && down.tau > 0) {
          const double level = dec.u2(x) + thr;
          CHECK(std::abs(dec.u2(x - down.tau) - level) <= 1e-10 * (1.0 + std::abs(level)));
        }
      }
    }
  }
}

TEST_CASE("decomposed step examples") {
  const auto b = irf::make_beta(2.0, 2.0);
  const auto& dec = *b.decomposition;
  // U2(x) = -log x: -log(0.5 - tau) = log 2 + log 2, so tau = 0.25.
  const auto mv = dec.arrival(0.5, -1, -std::log(0.5));
  CHECK_FALSE(mv.clamped);
  CHECK(mv.tau == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(irf::decomposed_transition(dec, 0.5, 0.5, -1) == doctest::Approx(0.375).epsilon(1e-12));
  for (const char* name : {"beta:2:2", "gaussian:0:1", "mixture:0.5:0:4:1", "beta:0.5:0.5"}) {
    const auto t = irf::make_target(name);
    for (double x : {0.3, 0.6}) {
      CHECK(irf::decomposed_transition(*t.decomposition, x, 1.0, 1) == x);
      CHECK(irf::decomposed_transition(*t.decomposition, x, 1.0, -1) == x);
    }
  }
  // A flat piece means the wall: uniform always clamps.
  const auto u = irf::make_uniform(0.0, 1.0);
  CHECK(irf::decomposed_transition(*u.decomposition, 0.2, 0.3, 1) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(irf::decomposed_transition(*u.decomposition, 0.2, 0.3, -1) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("invert_monotone") {
  const irf::ScalarFn ex = [](double x) { return std::exp(x); };
  auto r = irf::invert_monotone(ex, std::exp(2.0), 0.0, 10.0);
  CHECK(std::abs(r.x - 2.0) < 1e-10);
  CHECK_FALSE(r.clamped);

  r = irf::invert_monotone(ex, -1.0, 0.0, 10.0);
  CHECK(r.clamped);
  CHECK(r.x == 0.0);
  r = irf::invert_monotone(ex, 1e9, 0.0, 10.0);
  CHECK(r.clamped);
  CHECK(r.x == 10.0);

  const auto b = irf::make_beta(0.5, 2.0);
  const auto& dec = *b.decomposition;
  const irf::ScalarFn u1 = [&](double x) { return dec.u1(x); };
  const double y = dec.u1(0.3) + 0.7;
  const double expected = oracle::grid_inverse(u1, y, 0.3, 1.0 - 1e-9);
  r = irf::invert_monotone(u1, y, dec.lower_eval(), dec.upper_eval());
  CHECK(std::abs(r.x - expected) < 1e-8);
  CHECK(std::abs(u1(r.x) - y) <= 1e-10 * (1.0 + std::abs(y)));

  // Decreasing piece: largest root.
  const irf::ScalarFn dec_fn = [](double x) { return -x; };
  r = irf::invert_monotone(dec_fn, -0.25, 0.0, 1.0);
  CHECK(std::abs(r.x - 0.25) < 1e-10);
}

TEST_CASE("decomposition kernel") {
  const auto g = irf::make_gaussian(0.0, 1.0);
  const auto& dec = *g.decomposition;
  CHECK(irf::kernel_density_decomposed(dec, 0.0, 0.5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-6));
  CHECK(irf::kernel_density_decomposed(dec, 0.0, -0.5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-6));
  CHECK_THROWS_AS((void)irf::kernel_density_decomposed(dec, 0.2, 0.2), std::domain_error);

  // A probability kernel: the density integrates to one (no atoms on an unbounded line).
  const double x = 0.3;
  const int n = 200000;
  double total = 0.0;
  for (double side : {-1.0, 1.0}) {
    const double h = 10.0 / n;
    for (int k = 1; k <= n; ++k) {
      const double w = k == n ? 0.5 : 1.0;
      total += w * h * irf::kernel_density_decomposed(dec, x, x + side * h * k);
    }
  }
  CHECK(std::abs(total - 1.0) < 1e-3);
}

TEST_CASE("decomposition kernel leaves the target invariant") {
  SUBCASE("Gaussian") {
    const auto g = irf::make_gaussian(0.0, 1.0);
    const auto tests = irf::interior_test_points(-4.0, 4.0);
    const auto r = irf::stationarity_residual_decomposed(*g.decomposition, g.density, -8.0, 8.0, 2001, tests);
    CHECK(r.max_residual < 1e-4);
    const auto bad = irf::stationarity_residual_decomposed(*g.decomposition, g.density, -8.0, 8.0, 2001, tests,
                                                           irf::KernelVariant::NegativeControl);
    CHECK(bad.max_residual > 1e-2);
  }
  SUBCASE("Beta(2,2)") {
    const auto b = irf::make_beta(2.0, 2.0);
    const auto tests = irf::interior_test_points(0.0, 1.0);
    const auto r = irf::stationarity_residual_decomposed(*b.decomposition, b.density, 0.0, 1.0, 2001, tests);
    CHECK(r.max_residual < 1e-4);
  }
  SUBCASE("mixture") {
    const auto m = irf::make_target("mixture:0.5:0:4:1");
    const auto tests = irf::interior_test_points(-3.0, 7.0);
    const auto r = irf::stationarity_residual_decomposed(*m.decomposition, m.density, -9.0, 13.0, 4001, tests);
    CHECK(r.max_residual < 1e-3);
    const auto bad = irf::stationarity_residual_decomposed(*m.decomposition, m.density, -9.0, 13.0, 4001, tests,
                                                           irf::KernelVariant::NegativeControl);
    CHECK(bad.max_residual > 1e-2);
  }
}

TEST_CASE("decomposed chains") {
  SUBCASE("mixture marginal") {
    const auto m = irf::make_target("mixture:0.5:0:4:1");
    const auto batch = irf::run_decomposed(*m.decomposition, {50000, 8, 1, 0, m.name}, 2.0);
    CHECK(batch.meta.sampler == "decomposed");
    const Vec xs = batch.column(0);
    CHECK(irf::ks_distance(as_span(xs), m.cdf) < 0.02);
  }
  SUBCASE("agrees with the main sampler on Beta(2,2)") {
    const auto b = irf::make_beta(2.0, 2.0);
    const auto main = irf::run(b.potential, {50000, 12, 1, 0, b.name}, v1(0.5));
    const auto split = irf::run_decomposed(*b.decomposition, {50000, 13, 1, 0, b.name}, 0.5);
    const Vec a = main.column(0);
    const Vec c = split.column(0);
    CHECK(irf::ks_two_sample(as_span(a), as_span(c)) < 0.02);
  }
  SUBCASE("Beta regimes stay inside and match") {
    for (const char* name : {"beta:0.5:0.5", "beta:0.5:2", "beta:2:0.5", "beta:2:2"}) {
      CAPTURE(name);
      const auto t = irf::make_target(name);
      const auto batch = irf::run_decomposed(*t.decomposition, {50000, 3, 1, 0, t.name}, 0.5);
      const Vec xs = batch.column(0);
      CHECK(xs.minCoeff() > 0.0);
      CHECK(xs.maxCoeff() < 1.0);
      CHECK(irf::ks_distance(as_span(xs), t.cdf) < 0.03);
    }
  }
  SUBCASE("deterministic") {
    const auto b = irf::make_beta(2.0, 2.0);
    CHECK(irf::run_decomposed(*b.decomposition, {100, 4, 1, 0, ""}, 0.5).positions ==
          irf::run_decomposed(*b.decomposition, {100, 4, 1, 0, ""}, 0.5).positions);
  }
}
