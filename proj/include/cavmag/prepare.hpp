#pragma once
// Self-consistent ordered state: imaginary-time relaxation of component 1 in
// the lattice it generates, with the cavity slaved to its instantaneous fixed
// point each iteration. Above the ordering threshold this converges to the
// localized superradiant state (a genuine fixed point of the full coupled
// dynamics); below threshold it relaxes back to the uniform gas.
#include "cavmag/grid.hpp"
#include "cavmag/params.hpp"
#include "cavmag/state.hpp"

namespace cavmag {

struct PrepareOptions {
  double tol = 1e-11;    // relative change of <cos> between checks
  int max_iter = 20000;
  int check_every = 50;
  double dtau = 0.0;     // 0: auto from the estimated lattice depth
};

// branch = +1 localizes at the cos(k_c x) = -1 antinodes (c1 < 0, Re alpha >
// 0), branch = -1 at the mirror sites. All atoms end in component 1; alpha1
// is set to the self-consistent fixed point, alpha2 to 0, time to 0.
SystemState ordered_state(const PhysicalParams& p, const Grid& g,
                          int branch = +1, const PrepareOptions& opt = {});

}  // namespace cavmag
