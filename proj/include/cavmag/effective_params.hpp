// Dispersive-regime reduction: per-channel lattice and pump strengths from
// the raw couplings, and the two-photon detuning from the differential pump
// light shift.
#pragma once

#include "cavmag/errors.hpp"

namespace cavmag {

struct EffectiveChannel {
  double u = 0;    // lattice depth per photon, g^2 / Delta
  double eta = 0;  // pump-cavity scattering rate, g * omega_pump / Delta
};

inline EffectiveChannel derive_effective_channel(double g, double omega_pump,
                                                 double delta_atom) {
  if (delta_atom == 0)
    throw ConfigError(
        "derive_effective_channel: excited-state detuning must be nonzero");
  return {g * g / delta_atom, g * omega_pump / delta_atom};
}

struct EffectiveParams {
  EffectiveChannel ch1, ch2;
  double delta = 0;  // two-photon detuning
};

// Both Raman channels at once; delta = op2^2/d2 - op1^2/d1 + omega_g2 adds
// the bare level offset to the differential light shift.
inline EffectiveParams derive_effective_params(double g1, double op1,
                                               double d1, double g2,
                                               double op2, double d2,
                                               double omega_g2) {
  EffectiveParams ep;
  ep.ch1 = derive_effective_channel(g1, op1, d1);
  ep.ch2 = derive_effective_channel(g2, op2, d2);
  ep.delta = op2 * op2 / d2 - op1 * op1 / d1 + omega_g2;
  return ep;
}

}  // namespace cavmag
