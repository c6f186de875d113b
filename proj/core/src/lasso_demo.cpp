#include "irf/lasso_demo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "irf/diagnostics.hpp"

namespace irf::selective {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

MethodSummary summarize(const std::string& name, const std::vector<ReplicateResult>& reps,
                        std::vector<CoordinateInference> ReplicateResult::*field, double seconds) {
  MethodSummary s;
  s.method = name;
  s.seconds = seconds;
  std::vector<double> pvalues;
  int covered = 0;
  for (const auto& r : reps) {
    for (const auto& ci : r.*field) {
      ++s.intervals;
      covered += ci.covers(0.0) ? 1 : 0;
      s.unreliable += ci.reliable ? 0 : 1;
      pvalues.push_back(ci.pvalue);
    }
  }
  if (s.intervals > 0) {
    s.coverage_percent = 100.0 * covered / s.intervals;
    s.pvalue_ks = ks_distance(pvalues, [](double u) { return std::clamp(u, 0.0, 1.0); });
  }
  return s;
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("IRF_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ReplicateResult run_replicate(const LassoDemoConfig& cfg, int replicate, std::uint64_t seed) {
  ReplicateResult out;
  out.replicate = replicate;
  out.seed = seed;

  const SimulatedData data = simulate_equicorrelated(cfg.n, cfg.p, cfg.rho, mix_seed(seed, 0));
  const Scales scales = default_scales(data.y);
  SelectiveProblem prob;
  prob.X = data.X;
  prob.y = data.y;
  prob.lasso_penalty = cfg.lasso_penalty;
  prob.ridge = scales.ridge;
  prob.randomization = {cfg.randomization, scales.randomization_scale};
  Rng omega_rng(mix_seed(seed, 1));
  prob.omega = prob.randomization.sample(omega_rng, cfg.p);

  const LassoFit fit = solve_randomized_lasso(prob);
  out.active = fit.event.active;
  if (fit.event.active.empty()) return out;

  InferenceOptions options;
  options.level = cfg.level;
  out.naive = naive_inference(fit.event, cfg.level);

  auto start = std::chrono::steady_clock::now();
  const SampleBatch irf_batch = sample_opt_variables(fit.event, prob, cfg.steps, mix_seed(seed, 2));
  out.irf = pvalues_and_intervals(irf_batch, fit.event, prob, options);
  out.irf_seconds = seconds_since(start);

  start = std::chrono::steady_clock::now();
  const SampleBatch lv_batch =
      sample_opt_variables_langevin(fit.event, prob, cfg.langevin_steps, mix_seed(seed, 3), cfg.langevin_step);
  out.langevin = pvalues_and_intervals(lv_batch, fit.event, prob, options);
  out.langevin_seconds = seconds_since(start);
  return out;
}

LassoDemoReport run_lasso_demo(const LassoDemoConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("run_lasso_demo: reps must be positive");
  LassoDemoReport report;
  report.replicates.resize(static_cast<std::size_t>(cfg.reps));

  const int workers = std::min(resolve_threads(cfg.threads), cfg.reps);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int r = next++; r < cfg.reps && !failed; r = next++) {
      try {
        report.replicates[static_cast<std::size_t>(r)] =
            run_replicate(cfg, r, mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  double irf_s = 0.0;
  double lv_s = 0.0;
  for (const auto& r : report.replicates) {
    irf_s += r.irf_seconds;
    lv_s += r.langevin_seconds;
  }
  report.summary.push_back(summarize("irf", report.replicates, &ReplicateResult::irf, irf_s));
  report.summary.push_back(summarize("langevin", report.replicates, &ReplicateResult::langevin, lv_s));
  report.summary.push_back(summarize("naive", report.replicates, &ReplicateResult::naive, 0.0));
  return report;
}

}  // namespace irf::selective
