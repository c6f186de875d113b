#include <benchmark/benchmark.h>

#include <cmath>

#include "irf/arrival_time.hpp"
#include "irf/distributions.hpp"
#include "irf/hit_and_run.hpp"
#include "irf/langevin.hpp"
#include "irf/selective.hpp"

namespace {

using Vec = Eigen::VectorXd;
namespace sel = irf::selective;

struct SelectiveSetup {
  sel::SelectiveProblem prob;
  sel::SelectionEvent event;
};

SelectiveSetup selective_setup() {
  for (std::uint64_t s = 0;; ++s) {
    const auto data = sel::simulate_equicorrelated(100, 40, 0.3, s);
    const auto scales = sel::default_scales(data.y);
    sel::SelectiveProblem prob{data.X, data.y, 1.4, scales.ridge,
                               {sel::RandomizationKind::Gaussian, scales.randomization_scale}, {}};
    irf::Rng rng(s + 1);
    prob.omega = prob.randomization.sample(rng, 40);
    auto fit = sel::solve_randomized_lasso(prob);
    if (!fit.event.active.empty()) return {prob, fit.event};
  }
}

void BM_ArrivalGaussian(benchmark::State& state) {
  const auto g = irf::make_gaussian(0.0, 1.0);
  const auto line = irf::restrict_to_line(g.potential, Vec::Constant(1, -1.0), Vec::Constant(1, 1.0));
  irf::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(irf::solve_arrival(line, -std::log(rng.uniform_open())));
}
BENCHMARK(BM_ArrivalGaussian);

void BM_ArrivalMixture(benchmark::State& state) {
  const auto m = irf::make_target("mixture:0.5:0:4:1");
  const auto line = irf::restrict_to_line(m.potential, Vec::Constant(1, -2.0), Vec::Constant(1, 1.0));
  irf::Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(irf::solve_arrival(line, -std::log(rng.uniform_open())));
}
BENCHMARK(BM_ArrivalMixture);

void BM_HitAndRunStepSelective(benchmark::State& state) {
  const auto setup = selective_setup();
  const auto pot = sel::selective_potential(setup.event, setup.prob.randomization);
  irf::ChainState chain(setup.event.observed_opt, 3);
  for (auto _ : state) {
    irf::step(pot, chain);
    benchmark::DoNotOptimize(chain.position.data());
  }
}
BENCHMARK(BM_HitAndRunStepSelective);

void BM_LangevinStepSelective(benchmark::State& state) {
  const auto setup = selective_setup();
  const auto pot = sel::selective_potential(setup.event, setup.prob.randomization);
  const auto domain = sel::selective_domain(setup.event);
  const double eta = irf::default_langevin_step(40);
  Vec x = setup.event.observed_opt;
  irf::Rng rng(4);
  for (auto _ : state) {
    x = irf::projected_langevin_step(pot, domain, x, eta, rng);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_LangevinStepSelective);

}  // namespace
BENCHMARK_MAIN();
