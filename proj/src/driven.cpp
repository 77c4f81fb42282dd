#include "cavmag/driven.hpp"

#include <cmath>

#include "cavmag/errors.hpp"

namespace cavmag {

TimeSeries evolve_driven(const PhysicalParams& p, const DrivenConfig& cfg,
                         double epsilon, Rng* rng, NoiseKind kind) {
  if (!(cfg.dt > 0)) throw ConfigError("evolve_driven: dt must be > 0");
  if (cfg.t_final < 0) throw ConfigError("evolve_driven: t_final must be >= 0");
  if (epsilon > 0 && !rng)
    throw ConfigError("evolve_driven: noise needs an rng");

  const double N = p.n_atoms;
  TimeSeries ts;
  std::complex<double> a1 = 0, a2 = 0;

  long long nsteps = cfg.t_final == 0
                         ? 0
                         : std::max(1LL, static_cast<long long>(std::ceil(
                                             cfg.t_final / cfg.dt - 1e-9)));
  double dt = nsteps > 0 ? cfg.t_final / nsteps : cfg.dt;

  auto sample = [&](long long i) {
    double t = i * dt;
    double th = cfg.omega * (t - cfg.t0);
    ts.push(t, N * std::cos(th), std::norm(a1), std::norm(a2), 0.0);
  };

  sample(0);
  for (long long i = 0; i < nsteps; ++i) {
    // midpoint populations over the step
    double tm = (i + 0.5) * dt;
    double half = 0.5 * cfg.omega * (tm - cfg.t0);
    double cc = std::cos(half);
    double ss = std::sin(half);
    double n1 = N * cc * cc;
    double n2 = N * ss * ss;
    a1 = cavity_exp_step(a1, -n1, n1, p, dt, cfg.dispersive_shift);
    a2 = cavity_exp_step(a2, -n2, n2, p, dt, cfg.dispersive_shift);
    if (epsilon > 0) {
      a1 += cavity_noise_kick(p, dt, epsilon, kind, *rng);
      a2 += cavity_noise_kick(p, dt, epsilon, kind, *rng);
    }
    if ((i + 1) % cfg.record_every == 0 || i + 1 == nsteps) sample(i + 1);
  }
  return ts;
}

}  // namespace cavmag
