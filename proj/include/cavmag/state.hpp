#pragma once
// Two-component condensate wavefunctions on a grid plus the two cavity mode
// amplitudes. States are plain value objects; every operation returns a new
// state.
#include <complex>
#include <vector>

#include "cavmag/grid.hpp"
#include "cavmag/params.hpp"

namespace cavmag {

struct SystemState {
  std::vector<std::complex<double>> psi1, psi2;  // [sqrt(atoms/length)]
  std::complex<double> alpha1{0.0, 0.0};         // [sqrt(photons)]
  std::complex<double> alpha2{0.0, 0.0};
  double time = 0.0;  // [1/omega_r]
};

struct PseudoSpin {
  double sx = 0, sy = 0, sz = 0;  // [atoms]
};

enum class Axis { x, y, z };

// Uniform gas, N/2 atoms per component, with an optional relative density
// modulation seed_amplitude * cos(k_c x) on each component that seeds the
// self-ordering symmetry breaking. The sign of seed_amplitude selects the
// lattice branch; |seed_amplitude| >= 1 is rejected. Norm is renormalized to
// exactly N.
SystemState initial_state(const PhysicalParams& p, const Grid& g,
                          double seed_amplitude);

// Uniform Bloch product state sqrt(N) (e^{-i phi} cos(theta/2), sin(theta/2))
// spread over the grid; theta = 0 puts all atoms in component 1.
SystemState spin_state(const PhysicalParams& p, const Grid& g, double theta,
                       double phi);

PseudoSpin pseudo_spin(const SystemState& s, const Grid& g);

// Pointwise SU(2) rotation exp(-i angle n.sigma/2): rotates the Bloch vector
// right-handedly by angle about the chosen axis. Cavity amplitudes untouched.
SystemState apply_rotation(const SystemState& s, Axis axis, double angle);

double total_norm(const SystemState& s, const Grid& g);

// arg of the cross overlap integral psi1* psi2; 0 when either component is
// empty.
double relative_phase(const SystemState& s, const Grid& g);

}  // namespace cavmag
