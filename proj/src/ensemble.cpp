#include "cavmag/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "cavmag/errors.hpp"
#include "cavmag/rng.hpp"

namespace cavmag {

TrajectoryEnsemble run_ensemble_with(
    const std::function<TimeSeries(std::uint64_t)>& runner,
    std::uint64_t seed0, int m_traj, int n_threads) {
  if (m_traj < 1) throw ConfigError("run_ensemble: need at least 1 trajectory");
  if (n_threads < 1) n_threads = 1;

  std::vector<TimeSeries> results(m_traj);
  std::vector<char> failed(m_traj, 0);
  std::atomic<int> next{0};

  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= m_traj) return;
      try {
        results[i] = runner(seed0 + static_cast<std::uint64_t>(i));
      } catch (const std::exception&) {
        failed[i] = 1;
      }
    }
  };

  if (n_threads == 1 || m_traj == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    int nw = std::min(n_threads, m_traj);
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  TrajectoryEnsemble ens;
  for (int i = 0; i < m_traj; ++i) {
    if (failed[i]) {
      ++ens.failures;
      continue;
    }
    ens.trajectories.push_back(std::move(results[i]));
    ens.seeds.push_back(seed0 + static_cast<std::uint64_t>(i));
  }
  if (ens.failures * 10 > m_traj)
    throw NumericalError("run_ensemble: " + std::to_string(ens.failures) +
                         " of " + std::to_string(m_traj) +
                         " trajectories failed");
  if (ens.trajectories.empty())
    throw NumericalError("run_ensemble: all trajectories failed");

  const std::size_t ns = ens.trajectories.front().t.size();
  for (const auto& tr : ens.trajectories)
    if (tr.t != ens.trajectories.front().t)
      throw NumericalError("run_ensemble: trajectories disagree on sampling");

  const std::size_t m = ens.trajectories.size();
  auto reduce = [&](auto channel) {
    std::vector<double> mean(ns, 0.0), se(ns, 0.0);
    for (const auto& tr : ens.trajectories) {
      const auto& v = tr.*channel;
      for (std::size_t k = 0; k < ns; ++k) mean[k] += v[k];
    }
    for (auto& v : mean) v /= static_cast<double>(m);
    if (m > 1) {
      for (const auto& tr : ens.trajectories) {
        const auto& v = tr.*channel;
        for (std::size_t k = 0; k < ns; ++k) {
          double d = v[k] - mean[k];
          se[k] += d * d;
        }
      }
      for (auto& v : se)
        v = std::sqrt(v / static_cast<double>(m - 1) / static_cast<double>(m));
    }
    return std::pair(std::move(mean), std::move(se));
  };

  ens.mean.t = ens.trajectories.front().t;
  ens.std_err.t = ens.mean.t;
  std::tie(ens.mean.deltaN, ens.std_err.deltaN) = reduce(&TimeSeries::deltaN);
  std::tie(ens.mean.n1, ens.std_err.n1) = reduce(&TimeSeries::n1);
  std::tie(ens.mean.n2, ens.std_err.n2) = reduce(&TimeSeries::n2);
  std::tie(ens.mean.deltan, ens.std_err.deltan) = reduce(&TimeSeries::deltan);
  std::tie(ens.mean.phase, ens.std_err.phase) = reduce(&TimeSeries::phase);
  return ens;
}

TrajectoryEnsemble run_ensemble(const PhysicalParams& p,
                                const EnsembleConfig& cfg,
                                const NoiseConfig& noise, int m_traj) {
  std::function<TimeSeries(std::uint64_t)> runner;
  if (cfg.kind == EnsembleConfig::Kind::driven) {
    runner = [&p, &cfg, &noise](std::uint64_t seed) {
      Rng rng(seed);
      return evolve_driven(p, cfg.driven, noise.epsilon, &rng, noise.kind);
    };
  } else {
    runner = [&p, &cfg, &noise](std::uint64_t seed) {
      SystemState s = cfg.initial;
      NoiseConfig nc = noise;
      nc.seed = seed;
      Rng rng(seed);
      return evolve(s, p, cfg.grid, cfg.step, cfg.t_final, nc, rng);
    };
  }
  return run_ensemble_with(runner, noise.seed, m_traj, cfg.n_threads);
}

}  // namespace cavmag
