#pragma once
// Coupled atom-cavity integrator. Default scheme is the palindromic split
//   K(dt/2) C(dt/2) A(dt) C(dt/2) K(dt/2)
// with a spectral kinetic half step, exact cavity exponentials over frozen
// overlaps, and a pointwise exact 2x2 unitary for potential + Zeeman +
// inter-component coupling. Second order in dt; unitary on the atoms, so the
// norm is conserved to roundoff. rk4_monolithic integrates the same right
// hand side with classic RK4 for cross-checks.
#include <functional>
#include <memory>

#include "cavmag/cavity.hpp"
#include "cavmag/fft.hpp"
#include "cavmag/grid.hpp"
#include "cavmag/params.hpp"
#include "cavmag/state.hpp"
#include "cavmag/timeseries.hpp"

namespace cavmag {

enum class StepScheme { strang_split, rk4_monolithic };

struct StepConfig {
  double dt = 0.0;  // [1/omega_r]; 0 selects default_dt(params)
  StepScheme scheme = StepScheme::strang_split;
  int record_every = 1;
  bool cavity_dispersive_shift = true;  // keep the U0 c2 term in the cavity equation
};

// min(0.05/(|Delta_c| + N|U0|), 0.05/kappa, 0.01/max(Omega, 1)). Deep-lattice
// runs (potential depth >> these rates) need a smaller explicit dt; the run
// scripts that prepare ordered states pass one.
double default_dt(const PhysicalParams& p);

// Stiffness guard dt * max(|Delta_c| + N|U0|, kappa, Omega) <= 0.1.
void validate_step(const StepConfig& cfg, const PhysicalParams& p);

// Step size for runs whose optical lattice is much deeper than the linear
// rates behind default_dt, keyed off the prepared cavity amplitude.
double deep_lattice_dt(const PhysicalParams& p, const SystemState& s);

class Stepper {
 public:
  Stepper(const PhysicalParams& p, const Grid& g, const StepConfig& cfg);

  // Cavity measurement noise for stochastic trajectories; rng must outlive
  // the stepper. Only the strang_split scheme supports it.
  void set_noise(const NoiseConfig& noise, Rng* rng);

  SystemState step(const SystemState& s);

  double dt() const { return dt_; }

 private:
  void step_strang(SystemState& s);
  void step_rk4(SystemState& s);
  void rhs(const SystemState& s, SystemState& out);

  PhysicalParams p_;
  Grid g_;
  StepConfig cfg_;
  double dt_;
  Fft fft_;
  std::vector<double> cosx_, cos2x_;
  std::vector<std::complex<double>> kin_half_;  // e^{-i k^2 dt/2}
  NoiseConfig noise_;
  Rng* noise_rng_ = nullptr;
  // rk4 scratch
  std::vector<std::complex<double>> k1_, k2_, scratch_;
  std::unique_ptr<SystemState> tmp_[5];
};

// One step of the configured scheme (convenience wrapper; building a Stepper
// is cheaper when stepping many times).
SystemState step(const SystemState& s, const PhysicalParams& p, const Grid& g,
                 const StepConfig& cfg);

// Advance state to t_final, sampling observables every record_every steps
// (plus the initial and final samples). The state argument is advanced in
// place. dt is shrunk to divide the span exactly. An optional recorder is
// called at every sample.
TimeSeries evolve(SystemState& s, const PhysicalParams& p, const Grid& g,
                  const StepConfig& cfg, double t_final,
                  const std::function<void(const SystemState&)>& recorder = {});

// Same, with measurement noise on the cavity modes (one stochastic
// trajectory). epsilon = 0 reproduces the deterministic path bit for bit.
TimeSeries evolve(SystemState& s, const PhysicalParams& p, const Grid& g,
                  const StepConfig& cfg, double t_final,
                  const NoiseConfig& noise, Rng& rng,
                  const std::function<void(const SystemState&)>& recorder = {});

}  // namespace cavmag
