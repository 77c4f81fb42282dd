#pragma once
// Single cavity mode driven by the atomic overlaps:
//   i d/dt alpha = [-Delta_c + U0 c2 - i kappa] alpha + eta0 c1.
// The equation is linear in alpha for frozen overlaps, so the substep
// integrator is the exact exponential. Measurement back-action enters as an
// additive Gaussian kick on top of the exactly integrated drift, which keeps
// the epsilon = 0 path bit-identical to the deterministic one.
#include <complex>
#include <cstdint>
#include <utility>

#include "cavmag/params.hpp"
#include "cavmag/rng.hpp"

namespace cavmag {

enum class NoiseKind { complex_isotropic, real_only };

struct NoiseConfig {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  NoiseKind kind = NoiseKind::complex_isotropic;
};

// d alpha/dt for overlaps (c1, c2).
inline std::complex<double> cavity_rhs(std::complex<double> alpha,
                                       std::pair<double, double> ov,
                                       const PhysicalParams& p) {
  const std::complex<double> I(0.0, 1.0);
  std::complex<double> a_coeff(-p.delta_c + p.u0 * ov.second, -p.kappa);
  return -I * (a_coeff * alpha + p.eta0 * ov.first);
}

// Fixed point alpha_ss = eta0 c1 / (Delta_c - U0 c2 + i kappa).
inline std::complex<double> cavity_fixed_point(double c1, double c2,
                                               const PhysicalParams& p) {
  return p.eta0 * c1 /
         std::complex<double>(p.delta_c - p.u0 * c2, p.kappa);
}

namespace detail {
// (e^z - 1)/z with a series fallback near zero.
inline std::complex<double> expm1_over(std::complex<double> z) {
  if (std::abs(z) < 1e-4)
    return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0)));
  return (std::exp(z) - 1.0) / z;
}
}  // namespace detail

// Exact solution over dt with overlaps frozen:
//   alpha(t+dt) = e^{lam dt} alpha + dt (e^{lam dt}-1)/(lam dt) * b,
// lam = -i(-Delta_c + U0 c2 - i kappa), b = -i eta0 c1. Setting
// dispersive_shift = false drops the U0 c2 term from the cavity equation only.
inline std::complex<double> cavity_exp_step(std::complex<double> alpha,
                                            double c1, double c2,
                                            const PhysicalParams& p, double dt,
                                            bool dispersive_shift = true) {
  const std::complex<double> I(0.0, 1.0);
  std::complex<double> a_coeff(-p.delta_c + (dispersive_shift ? p.u0 * c2 : 0.0),
                               -p.kappa);
  std::complex<double> lam = -I * a_coeff;
  std::complex<double> b = -I * (p.eta0 * c1);
  return std::exp(lam * dt) * alpha + dt * detail::expm1_over(lam * dt) * b;
}

// Additive measurement noise accumulated over dt: total variance
// 2 epsilon kappa dt per mode, split equally between quadratures for the
// complex-isotropic kind, all on the real part for real-only. Draw order is
// fixed (re then im) so streams are reproducible.
inline std::complex<double> cavity_noise_kick(const PhysicalParams& p,
                                              double dt, double epsilon,
                                              NoiseKind kind, Rng& rng) {
  if (epsilon == 0.0) return {0.0, 0.0};
  if (kind == NoiseKind::complex_isotropic) {
    double s = std::sqrt(epsilon * p.kappa * dt);
    double re = s * rng.gaussian();
    double im = s * rng.gaussian();
    return {re, im};
  }
  double s = std::sqrt(2.0 * epsilon * p.kappa * dt);
  return {s * rng.gaussian(), 0.0};
}

// One stochastic step: exactly integrated drift plus the additive kick.
inline std::complex<double> noisy_cavity_step(std::complex<double> alpha,
                                              std::pair<double, double> ov,
                                              const PhysicalParams& p,
                                              double dt, Rng& rng,
                                              NoiseKind kind =
                                                  NoiseKind::complex_isotropic,
                                              bool dispersive_shift = true) {
  auto out = cavity_exp_step(alpha, ov.first, ov.second, p, dt,
                             dispersive_shift);
  return out + cavity_noise_kick(p, dt, p.epsilon, kind, rng);
}

}  // namespace cavmag
