// Magnetometry sequences: Ramsey readout of a static parallel field and Rabi
// readout of a resonant transverse field, plus photon-record synthesis and
// the matching field estimators.
#pragma once

#include <utility>
#include <vector>

#include "cavmag/grid.hpp"
#include "cavmag/params.hpp"
#include "cavmag/rng.hpp"
#include "cavmag/state.hpp"

namespace cavmag {

// How the interrogation phase phi = gamma B_par tau is accrued: applied
// exactly in the rotating frame, or by timed pump-off evolution.
enum class Interrogation { analytic, evolved };

// How the measurement counts are produced: closed-form steady-state rates, or
// cavity integration over a self-ordered measurement window.
enum class Readout { model, cavity_sim };

struct RamseyConfig {
  double tau = 0.01;     // interrogation time [s]
  double t_meas = 0.01;  // photon collection time [s]
  double t_cycle = 1.0;  // full experiment cycle [s]
  double b_true = 0.0;   // parallel field [T]
  bool shot_noise = false;
  Interrogation interrogation = Interrogation::analytic;
  Readout readout = Readout::model;
};

struct RabiConfig {
  double duration = 2.5e-6;  // evolution time [s]
  double dt_window = 5e-8;   // detection window [s]
  double b_true = 0.0;       // transverse field amplitude [T]
  bool shot_noise = false;
};

struct PhotonRecord {
  // (timestamp [s], detected count imbalance mode1 - mode2)
  std::vector<std::pair<double, double>> samples;
  bool shot_noise_applied = false;
};

struct BEstimate {
  double b = 0.0;            // [T]
  double uncertainty = 0.0;  // [T], error-propagation width of one shot
  bool clipped = false;      // record fell outside the invertible range
  bool divergent = false;    // operating point near sin(phi) = 0
};

// Prepare the equal superposition, accrue phi = gamma B_par tau, convert the
// phase to a population imbalance with a pi/2 pulse, then collect the photon
// imbalance over t_meas.  Returns the single-sample record and the post-pulse
// state (cavity amplitudes set to the per-mode fixed points the measurement
// relaxes to).  Expected record mean: kappa t n_ss cos(phi).
std::pair<PhotonRecord, SystemState> run_ramsey(const PhysicalParams& p,
                                                const Grid& g,
                                                const RamseyConfig& cfg,
                                                Rng& rng);

// Start from the self-ordered state with all atoms in component 1, drive
// resonant population oscillations at Omega = gamma B_perp, and detect the
// photon imbalance in windows of dt_window.
PhotonRecord run_rabi(const PhysicalParams& p, const Grid& g,
                      const RabiConfig& cfg, Rng& rng);

// Inverts cos(phi) = delta_n / (kappa t n_ss); b = phi / (gamma tau).  Out of
// range records are clipped and flagged.
BEstimate estimate_b_parallel(const PhotonRecord& record,
                              const PhysicalParams& p,
                              const RamseyConfig& cfg);

// Oscillation frequency via spectral peak plus local least-squares
// refinement; b = Omega / gamma.
BEstimate estimate_b_perp(const PhotonRecord& record, const PhysicalParams& p);

}  // namespace cavmag
