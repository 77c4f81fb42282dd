#pragma once
// Cavity dynamics with a prescribed flopping atomic distribution: the atoms
// stay ordered at the cos(k_c x) = -1 sites while their populations exchange
// as N1(t) = N cos^2(omega (t - t0)/2), giving overlaps c1_j = -N_j(t),
// c2_j = N_j(t). This isolates the cavity response (lag and amplitude of the
// relative photon number) from the self-trapping that blocks real transfer in
// a deep lattice.
#include "cavmag/cavity.hpp"
#include "cavmag/params.hpp"
#include "cavmag/timeseries.hpp"

namespace cavmag {

struct DrivenConfig {
  double omega = 0.0;        // flopping frequency [omega_r]
  double t0 = 0.0;           // time of full imbalance deltaN = +N [1/omega_r]
  double t_final = 0.0;      // [1/omega_r]
  double dt = 1e-6;          // [1/omega_r]
  int record_every = 10;
  bool dispersive_shift = true;
};

// Integrates both cavity modes from alpha = 0 with exact per-step
// exponentials over midpoint-frozen overlaps. Optional measurement noise
// (epsilon > 0 with an rng) adds per-step Gaussian kicks; epsilon = 0 with or
// without an rng gives the identical deterministic series.
TimeSeries evolve_driven(const PhysicalParams& p, const DrivenConfig& cfg,
                         double epsilon = 0.0, Rng* rng = nullptr,
                         NoiseKind kind = NoiseKind::complex_isotropic);

}  // namespace cavmag
