#pragma once
// Model parameters. All rates are in recoil units (hbar = 1, omega_r = 1,
// k_c = 1, so the kinetic term for e^{ikx} is k^2). Magnetic fields are in
// tesla and gamma_gyro in rad/(s T); omega_r_hz converts recoil rates to
// laboratory rad/s.
#include <numbers>
#include <string>
#include <vector>

namespace cavmag {

struct PhysicalParams {
  double delta_c = -3300.0;  // cavity-pump detuning Delta_c [omega_r]
  double u0 = -1.0 / 600.0;  // per-photon lattice depth U0 [omega_r]
  double eta0 = 300.0;       // effective pump eta0 [omega_r]
  double kappa = 300.0;      // cavity field decay kappa [omega_r]
  double n_atoms = 1e4;      // atom number N
  double delta = 0.0;        // two-photon detuning on component 2 [omega_r]
  double b_parallel = 0.0;   // static field along z [T]
  double b_perp = 0.0;       // rf/ac field amplitude [T]
  double omega_ac = 0.0;     // ac drive frequency [omega_r]
  double gamma_gyro = 2.0 * std::numbers::pi * 7e9;    // [rad/(s T)]
  double omega_r_hz = 2.0 * std::numbers::pi * 3770.0; // omega_r [rad/s]
  double epsilon = 0.0;      // measurement efficiency, 0..1

  // Rabi frequency Omega = gamma B_perp in recoil units.
  double rabi_frequency() const { return gamma_gyro * b_perp / omega_r_hz; }
  // Zeeman shift gamma B_parallel in recoil units.
  double zeeman_parallel() const {
    return gamma_gyro * b_parallel / omega_r_hz;
  }
  double kappa_lab() const { return kappa * omega_r_hz; }  // [rad/s]

  // Diagonal single-particle energies in the rotating frame: component 1
  // carries -(gamma B_parallel + omega_ac), component 2 carries +delta.
  double diag1() const { return -(zeeman_parallel() + omega_ac); }
  double diag2() const { return delta; }

  std::vector<std::string> violations() const;
  void validate() const;  // throws ConfigError listing every violation
};

}  // namespace cavmag
