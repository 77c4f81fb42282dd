// Closed-form cavity-field solutions, superradiant steady state, oscillation
// regime classification, phase-lag extraction, and metrology bounds.
#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "cavmag/params.hpp"

namespace cavmag {

// Photon number of the self-ordered steady state,
// n_ss = N^2 eta0^2 / [(Delta_c - N U0)^2 + kappa^2].
double steady_state_photons(const PhysicalParams& p);

// Transient cavity amplitudes (alpha1, alpha2) for atoms flopping between the
// components at Rabi frequency omega with perfect spatial order, dispersive
// shift neglected.  theta = omega*(t - t0); at theta = 0 all atoms sit in
// component 1.
std::pair<std::complex<double>, std::complex<double>> analytic_cavity_fields(
    double t, double omega, double t0, const PhysicalParams& p);

// Photon imbalance n1 - n2 for the same configuration.  Sign convention: the
// mode driven by the occupied component carries the photons, so delta_n > 0 at
// theta = 0; this matches |alpha1|^2 - |alpha2|^2 from analytic_cavity_fields.
double analytic_delta_n(double t, double omega, double t0,
                        const PhysicalParams& p);

// Phase by which the photon imbalance trails the population imbalance in the
// closed-form solution, in [0, pi].
double model_phase_lag(double omega, const PhysicalParams& p);

// Peak amplitude of the closed-form photon-imbalance oscillation, in photons.
double model_delta_n_amplitude(double omega, const PhysicalParams& p);

enum class Regime { adiabatic, resonant, fast };
const char* regime_name(Regime r);

struct RegimeReport {
  Regime regime = Regime::adiabatic;
  double predicted_lag = 0;    // rad: 0, pi/2, or pi by regime
  double amplitude_model = 0;  // photons, closed-form envelope
};

// Buckets the drive frequency against the cavity detuning:
// omega < 0.5|Delta_c| adiabatic, up to 2|Delta_c| resonant, beyond that fast.
RegimeReport classify_regime(double omega, const PhysicalParams& p);

// Phase by which channel b trails channel a at frequency omega, extracted by
// quadrature projection over a whole number of periods and folded into
// [0, pi].  Both channels must share the time grid t and span >= 3 periods.
double phase_lag(const std::vector<double>& t, const std::vector<double>& a,
                 const std::vector<double>& b, double omega);

enum class Scheme { ramsey, rabi, single_mode };
const char* scheme_name(Scheme s);

struct SensitivityReport {
  Scheme scheme = Scheme::ramsey;
  double bound = 0;  // Delta B * sqrt(T), tesla/sqrt(Hz)
  double qfi = 0;    // per-shot Fisher information, 1/tesla^2
  std::vector<std::pair<std::string, double>> inputs;
};

// Shot-noise-limited field resolutions of the two protocols.  Times are
// laboratory seconds; the cavity rate enters in laboratory units.
//   ramsey: Delta B * sqrt(T) = sqrt(t_cycle) / (gamma tau sqrt(kappa t_meas) |alpha0|)
//   rabi:   Delta B * sqrt(T) = sqrt(t_cycle) / (gamma t   sqrt(kappa dt_window) |alpha0|)
SensitivityReport sensitivity_ramsey(const PhysicalParams& p, double tau,
                                     double t_meas, double t_cycle);
SensitivityReport sensitivity_rabi(const PhysicalParams& p, double t,
                                   double dt_window, double t_cycle);

// Single-shot Cramer-Rao resolution 1/sqrt(F_q) with F_q = (d alpha / dB)^2.
// A vanishing derivative returns +infinity.
double qfi_bound(double d_alpha_d_b, Scheme scheme);

// Field-amplitude models underlying the bounds above (phi accumulated over the
// interrogation, homodyne record integrated over the measurement window).
double ramsey_model_alpha(const PhysicalParams& p, double tau, double t_meas,
                          double b);
double rabi_model_alpha(const PhysicalParams& p, double t, double dt_window,
                        double b);

// Field amplitude seen by a detector watching a single mode instead of the
// difference: (|alpha0|/2) (1 + branch*cos(phi)).
double single_mode_model(double phi, const PhysicalParams& p, int branch = +1);

// Central second-order finite difference, for derivative cross-checks.
template <class F>
double central_difference(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

struct ScalingFit {
  double exponent = 0;    // least-squares slope of log(bound) vs log(N)
  double confidence = 0;  // standard error of the slope
};

// Power-law fit of sensitivity bounds against atom number.  Needs at least 3
// points spanning at least 1.5 decades in N.
ScalingFit scaling_fit(const std::vector<double>& n_values,
                       const std::vector<double>& bounds);

}  // namespace cavmag
