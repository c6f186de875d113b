#include <doctest.h>

#include <cmath>

#include "irf/errors.hpp"
#include "irf/arrival_time.hpp"
#include "irf/diagnostics.hpp"
#include "irf/distributions.hpp"
#include "irf/hit_and_run.hpp"
#include "irf/truncated.hpp"
#include "oracles.hpp"

using Vec = Eigen::VectorXd;

namespace {
Vec v1(double a) { return Vec::Constant(1, a); }
}  // namespace

TEST_CASE("line_domain_bounds") {
  const auto d = irf::DomainSet::interval(1.0, 3.0);
  auto [lo, hi] = irf::line_domain_bounds(d, v1(1.5), v1(1.0));
  CHECK(lo == 0.0);
  CHECK(hi == doctest::Approx(1.5).epsilon(1e-15));
  std::tie(lo, hi) = irf::line_domain_bounds(d, v1(1.5), v1(-1.0));
  CHECK(lo == 0.0);
  CHECK(hi == doctest::Approx(0.5).epsilon(1e-15));

  Vec signs(2);
  signs << 1, 1;
  const auto oc = irf::DomainSet::orthant_cube(signs, 1, 1.4);
  Vec x(3), v(3);
  x << 0.2, 0.3, 0.0;
  v << -1, 0, 0;
  std::tie(lo, hi) = irf::line_domain_bounds(oc, x, v);
  CHECK(lo == 0.0);
  CHECK(hi == doctest::Approx(0.2).epsilon(1e-15));

  CHECK_THROWS_AS((void)irf::line_domain_bounds(d, v1(0.5), v1(1.0)), irf::DomainError);
}

TEST_CASE("argmin_on_segment") {
  const auto tn = irf::make_truncated_gaussian(0.0, 1.0, 1.0, 3.0);
  auto line = irf::restrict_to_line(tn.potential, v1(1.5), v1(1.0));
  CHECK(irf::argmin_on_segment(line, 0.0, line.t_max()) == 0.0);

  const auto wide = irf::make_truncated_gaussian(0.0, 1.0, -3.0, 3.0);
  line = irf::restrict_to_line(wide.potential, v1(-1.0), v1(1.0));
  const double t_star = irf::argmin_on_segment(line, 0.0, line.t_max());
  CHECK(std::abs(t_star - 1.0) < 1e-10);
  CHECK(std::abs(line.slope(t_star)) < 1e-10);

  const auto b = irf::make_beta(2.0, 2.0);
  line = irf::restrict_to_line(b.potential, v1(0.2), v1(1.0));
  CHECK(std::abs(irf::argmin_on_segment(line, 0.0, line.t_max()) - 0.3) < 1e-10);

  // Decreasing all the way: the far end.
  line = irf::restrict_to_line(tn.potential, v1(2.0), v1(-1.0));
  CHECK(irf::argmin_on_segment(line, 0.0, line.t_max()) == doctest::Approx(line.t_max()).epsilon(1e-12));
}

TEST_CASE("solve_truncated_arrival examples") {
  const auto tn = irf::make_truncated_gaussian(0.0, 1.0, 1.0, 3.0);
  const auto line = irf::restrict_to_line(tn.potential, v1(1.5), v1(1.0));

  SUBCASE("interior root") {
    const double V = 0.9;
    // U(1.5 + tau) - U(1.5) = -log V with U = x^2 / 2.
    const double expected = std::sqrt(2.0 * (1.125 - std::log(V))) - 1.5;
    const auto r = irf::solve_truncated_arrival(line, 0.0, line.t_max(), V);
    CHECK_FALSE(r.clamped);
    CHECK(std::abs(r.tau - expected) < 1e-10);
    CHECK(r.tau == doctest::Approx(0.068668).epsilon(1e-5));
    CHECK(1.5 + r.tau / 2 == doctest::Approx(1.534334).epsilon(1e-6));
    // Bisection oracle on the same equation.
    const double bisected = oracle::grid_inverse([](double t) { return 0.5 * (1.5 + t) * (1.5 + t) - 1.125; },
                                                 -std::log(V), 0.0, 1.5);
    CHECK(std::abs(r.tau - bisected) < 1e-9);
  }
  SUBCASE("clamped at the wall") {
    const auto r = irf::solve_truncated_arrival(line, 0.0, line.t_max(), std::exp(-4.0));
    CHECK(r.clamped);
    CHECK(r.tau == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(1.5 + r.tau / 2 == doctest::Approx(2.25).epsilon(1e-15));
  }
  SUBCASE("V near one approaches t*") {
    const auto b = irf::make_beta(2.0, 2.0);
    const auto bl = irf::restrict_to_line(b.potential, v1(0.2), v1(1.0));
    const auto r = irf::solve_truncated_arrival(bl, 0.0, bl.t_max(), 1.0 - 1e-12);
    CHECK(std::abs(r.tau - 0.3) < 1e-5);
    CHECK(irf::solve_truncated_arrival(bl, 0.0, bl.t_max(), 1.0).tau == 0.0);
  }
  SUBCASE("invalid V") {
    CHECK_THROWS_AS((void)irf::solve_truncated_arrival(line, 0.0, line.t_max(), 0.0), std::invalid_argument);
  }
}

TEST_CASE("truncated procedure agrees with the general solver") {
  const std::vector<irf::TargetSpec> targets{irf::make_truncated_gaussian(0.0, 1.0, 1.0, 3.0), irf::make_beta(2.0, 2.0),
                                             irf::make_beta(3.0, 2.0),
                                             irf::make_truncated_gaussian(0.5, 2.0, -3.0, 3.0)};
  irf::Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    const auto& t = targets[static_cast<std::size_t>(k) % targets.size()];
    const double lo = t.potential.domain().lower()(0);
    const double hi = t.potential.domain().upper()(0);
    const double x = lo + (hi - lo) * rng.uniform(0.01, 0.99);
    const double v = rng.uniform_open() < 0.5 ? -1.0 : 1.0;
    const double V = rng.uniform_open();
    const auto line = irf::restrict_to_line(t.potential, v1(x), v1(v));
    const auto a = irf::solve_truncated_arrival(line, 0.0, line.t_max(), V);
    const auto b = irf::solve_arrival(line, -std::log(V));
    CHECK(a.clamped == b.clamped);
    CHECK(std::abs(a.tau - b.tau) < 1e-9);
  }
}

TEST_CASE("convexity spot check") {
  const auto b = irf::make_beta(2.0, 2.0);
  const auto line = irf::restrict_to_line(b.potential, v1(0.3), v1(1.0));
  CHECK(irf::spot_check_convexity(line, line.eval_limit()));
  const auto m = irf::make_target("mixture:0.5:0:4:1");
  const auto ml = irf::restrict_to_line(m.potential, v1(-2.0), v1(1.0));
  CHECK_FALSE(irf::spot_check_convexity(ml, 8.0));
}

TEST_CASE("truncated N(0,1) on [1,3]") {
  const auto tn = irf::make_truncated_gaussian(0.0, 1.0, 1.0, 3.0);
  const auto batch = irf::run(tn.potential, {50000, 5, 1, 0, tn.name}, irf::default_start(tn.potential));
  const Vec xs = batch.column(0);
  CHECK(xs.minCoeff() > 1.0);
  CHECK(xs.maxCoeff() < 3.0);
  CHECK(irf::ks_distance(std::span<const double>(xs.data(), 50000), tn.cdf) < 0.02);
  const double mean = oracle::truncated_normal_mean(0.0, 1.0, 3.0);
  CHECK(mean == doctest::Approx(1.51006).epsilon(1e-5));
  CHECK(std::abs(xs.mean() - mean) < 0.01);
}
