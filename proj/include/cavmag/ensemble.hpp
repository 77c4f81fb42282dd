// Seeded trajectory ensembles with deterministic seed-order reduction.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cavmag/driven.hpp"
#include "cavmag/grid.hpp"
#include "cavmag/params.hpp"
#include "cavmag/state.hpp"
#include "cavmag/stepper.hpp"
#include "cavmag/timeseries.hpp"

namespace cavmag {

struct TrajectoryEnsemble {
  std::vector<TimeSeries> trajectories;  // kept trajectories, in seed order
  TimeSeries mean;                       // pointwise arithmetic mean
  TimeSeries std_err;                    // sample std / sqrt(M) per channel
  std::vector<std::uint64_t> seeds;      // seeds of the kept trajectories
  int failures = 0;                      // excluded trajectories
};

// Runs m_traj independent trajectories with seeds seed0 .. seed0+m-1 on up to
// n_threads workers.  The reduction is accumulated in seed order, so results
// are bit-identical for any thread count.  Individual failures are excluded
// and counted; more than 10% failing aborts the ensemble.
TrajectoryEnsemble run_ensemble_with(
    const std::function<TimeSeries(std::uint64_t)>& runner,
    std::uint64_t seed0, int m_traj, int n_threads = 1);

// Trajectory recipe for the config-driven entry point: either the prescribed
// population drive with slaved cavity modes, or the full coupled system from
// a caller-supplied initial state.
struct EnsembleConfig {
  enum class Kind { driven, full };
  Kind kind = Kind::driven;
  DrivenConfig driven;   // kind == driven
  SystemState initial;   // kind == full
  Grid grid;             // kind == full
  StepConfig step;       // kind == full
  double t_final = 0;    // kind == full
  int n_threads = 1;
};

TrajectoryEnsemble run_ensemble(const PhysicalParams& p,
                                const EnsembleConfig& cfg,
                                const NoiseConfig& noise, int m_traj);

}  // namespace cavmag
