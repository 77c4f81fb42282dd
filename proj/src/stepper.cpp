#include "cavmag/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cavmag/errors.hpp"
#include "cavmag/overlaps.hpp"

namespace cavmag {

double default_dt(const PhysicalParams& p) {
  double stiff = std::abs(p.delta_c) + p.n_atoms * std::abs(p.u0);
  double dt = 0.05 / std::max(stiff, 1e-12);
  dt = std::min(dt, 0.05 / p.kappa);
  dt = std::min(dt, 0.01 / std::max(p.rabi_frequency(), 1.0));
  return dt;
}

void validate_step(const StepConfig& cfg, const PhysicalParams& p) {
  if (!(cfg.dt > 0)) throw ConfigError("StepConfig: dt must be > 0");
  if (cfg.record_every < 1)
    throw ConfigError("StepConfig: record_every must be >= 1");
  double stiff = std::max({std::abs(p.delta_c) + p.n_atoms * std::abs(p.u0),
                           p.kappa, p.rabi_frequency()});
  if (cfg.dt * stiff > 0.1 + 1e-12) {
    std::ostringstream os;
    os << "StepConfig: dt = " << cfg.dt << " violates the stiffness guard "
       << "dt * max(|delta_c| + N|u0|, kappa, Omega) <= 0.1 (product = "
       << cfg.dt * stiff << ")";
    throw ConfigError(os.str());
  }
}

double deep_lattice_dt(const PhysicalParams& p, const SystemState& s) {
  double depth = 2.0 * std::abs(p.eta0 * s.alpha1.real()) +
                 std::abs(p.u0) * std::norm(s.alpha1);
  double dt = default_dt(p);
  if (depth > 1e4) dt = std::min(dt, 2e-6);
  return dt;
}

Stepper::Stepper(const PhysicalParams& p, const Grid& g, const StepConfig& cfg)
    : p_(p), g_(g), cfg_(cfg), dt_(cfg.dt > 0 ? cfg.dt : default_dt(p)),
      fft_(g.n_points) {
  StepConfig eff = cfg_;
  eff.dt = dt_;
  validate_step(eff, p_);
  cosx_.resize(g.n_points);
  cos2x_.resize(g.n_points);
  kin_half_.resize(g.n_points);
  for (int i = 0; i < g.n_points; ++i) {
    cosx_[i] = std::cos(g.x[i]);
    cos2x_[i] = cosx_[i] * cosx_[i];
    double k2 = g.wavenumbers[i] * g.wavenumbers[i];
    kin_half_[i] = std::exp(std::complex<double>(0.0, -k2 * dt_ / 2.0));
  }
}

void Stepper::set_noise(const NoiseConfig& noise, Rng* rng) {
  if (noise.epsilon > 0 && cfg_.scheme != StepScheme::strang_split)
    throw ConfigError("cavity noise requires the strang_split scheme");
  noise_ = noise;
  noise_rng_ = rng;
}

SystemState Stepper::step(const SystemState& s) {
  SystemState out = s;
  if (cfg_.scheme == StepScheme::strang_split)
    step_strang(out);
  else
    step_rk4(out);
  out.time = s.time + dt_;
  // Cheap sanity checks each step: the atoms evolve unitarily, so any drift
  // beyond roundoff means the step went numerically bad.
  double norm = total_norm(out, g_);
  if (!std::isfinite(norm) || !std::isfinite(std::norm(out.alpha1)) ||
      !std::isfinite(std::norm(out.alpha2))) {
    std::ostringstream os;
    os << "non-finite state at t = " << out.time;
    throw NumericalError(os.str());
  }
  double before = total_norm(s, g_);
  if (std::abs(norm - before) > 1e-6 * std::max(before, 1.0)) {
    std::ostringstream os;
    os << "norm drift " << std::abs(norm - before) / std::max(before, 1.0)
       << " in one step at t = " << out.time;
    throw NumericalError(os.str());
  }
  return out;
}

void Stepper::step_strang(SystemState& s) {
  const int n = g_.n_points;
  const std::complex<double> I(0.0, 1.0);
  const double om = p_.rabi_frequency();

  auto kinetic_half = [&](SystemState& st) {
    fft_.forward(st.psi1);
    fft_.forward(st.psi2);
    for (int i = 0; i < n; ++i) {
      st.psi1[i] *= kin_half_[i];
      st.psi2[i] *= kin_half_[i];
    }
    fft_.inverse(st.psi1);
    fft_.inverse(st.psi2);
  };

  auto cavity_half = [&](SystemState& st) {
    Overlaps ov = overlaps(st, g_);
    st.alpha1 = cavity_exp_step(st.alpha1, ov.c1[0], ov.c2[0], p_, dt_ / 2,
                                cfg_.cavity_dispersive_shift);
    st.alpha2 = cavity_exp_step(st.alpha2, ov.c1[1], ov.c2[1], p_, dt_ / 2,
                                cfg_.cavity_dispersive_shift);
    if (noise_rng_ && noise_.epsilon > 0) {
      st.alpha1 += cavity_noise_kick(p_, dt_ / 2, noise_.epsilon, noise_.kind,
                                     *noise_rng_);
      st.alpha2 += cavity_noise_kick(p_, dt_ / 2, noise_.epsilon, noise_.kind,
                                     *noise_rng_);
    }
  };

  kinetic_half(s);
  cavity_half(s);

  // Pointwise exact unitary for H = (V_j + diagonal Zeeman) + coupling:
  // H = ad I + b.sigma with bx = 0, by = -Omega/2, bz = (h1 - h2)/2.
  const double d1 = p_.diag1();
  const double d2 = p_.diag2();
  const double by = -om / 2.0;
  for (int i = 0; i < n; ++i) {
    double v1 = p_.u0 * std::norm(s.alpha1) * cos2x_[i] +
                2.0 * p_.eta0 * s.alpha1.real() * cosx_[i];
    double v2 = p_.u0 * std::norm(s.alpha2) * cos2x_[i] +
                2.0 * p_.eta0 * s.alpha2.real() * cosx_[i];
    double h1 = v1 + d1;
    double h2 = v2 + d2;
    double ad = 0.5 * (h1 + h2);
    double bz = 0.5 * (h1 - h2);
    double bn = std::sqrt(bz * bz + by * by);
    double arg = bn * dt_;
    double c = std::cos(arg);
    // sin(bn dt)/bn with the small-argument series
    double sn = (arg < 1e-6) ? dt_ * (1.0 - arg * arg / 6.0)
                             : std::sin(arg) / bn;
    std::complex<double> ph = std::exp(-I * ad * dt_);
    std::complex<double> m11 = ph * std::complex<double>(c, -bz * sn);
    std::complex<double> m22 = ph * std::complex<double>(c, bz * sn);
    // off-diagonals: -i (bx -+ i by) sn with bx = 0
    std::complex<double> m12 = ph * (-by * sn);
    std::complex<double> m21 = ph * (by * sn);
    auto p1 = s.psi1[i];
    auto p2 = s.psi2[i];
    s.psi1[i] = m11 * p1 + m12 * p2;
    s.psi2[i] = m21 * p1 + m22 * p2;
  }

  cavity_half(s);
  kinetic_half(s);
}

void Stepper::rhs(const SystemState& s, SystemState& out) {
  const int n = g_.n_points;
  const std::complex<double> I(0.0, 1.0);
  const double om = p_.rabi_frequency();
  out.psi1.resize(n);
  out.psi2.resize(n);

  // Kinetic term via the spectral second derivative.
  k1_ = s.psi1;
  k2_ = s.psi2;
  fft_.forward(k1_);
  fft_.forward(k2_);
  for (int i = 0; i < n; ++i) {
    double k2v = g_.wavenumbers[i] * g_.wavenumbers[i];
    k1_[i] *= k2v;
    k2_[i] *= k2v;
  }
  fft_.inverse(k1_);
  fft_.inverse(k2_);

  Overlaps ov = overlaps(s, g_);
  const double d1 = p_.diag1();
  const double d2 = p_.diag2();
  for (int i = 0; i < n; ++i) {
    double v1 = p_.u0 * std::norm(s.alpha1) * cos2x_[i] +
                2.0 * p_.eta0 * s.alpha1.real() * cosx_[i];
    double v2 = p_.u0 * std::norm(s.alpha2) * cos2x_[i] +
                2.0 * p_.eta0 * s.alpha2.real() * cosx_[i];
    out.psi1[i] = -I * (k1_[i] + (v1 + d1) * s.psi1[i]) +
                  (om / 2.0) * s.psi2[i];
    out.psi2[i] = -I * (k2_[i] + (v2 + d2) * s.psi2[i]) -
                  (om / 2.0) * s.psi1[i];
  }
  out.alpha1 = cavity_rhs(s.alpha1, {ov.c1[0], ov.c2[0]}, p_);
  out.alpha2 = cavity_rhs(s.alpha2, {ov.c1[1], ov.c2[1]}, p_);
  if (!cfg_.cavity_dispersive_shift) {
    // Remove the U0 c2 piece: rhs difference is -i U0 c2 alpha.
    out.alpha1 += I * (p_.u0 * ov.c2[0]) * s.alpha1;
    out.alpha2 += I * (p_.u0 * ov.c2[1]) * s.alpha2;
  }
}

void Stepper::step_rk4(SystemState& s) {
  const int n = g_.n_points;
  for (auto& t : tmp_)
    if (!t) t = std::make_unique<SystemState>();
  SystemState& d1 = *tmp_[0];
  SystemState& d2 = *tmp_[1];
  SystemState& d3 = *tmp_[2];
  SystemState& d4 = *tmp_[3];
  SystemState& y = *tmp_[4];

  auto axpy = [&](const SystemState& base, const SystemState& d, double h,
                  SystemState& out) {
    out.psi1.resize(n);
    out.psi2.resize(n);
    for (int i = 0; i < n; ++i) {
      out.psi1[i] = base.psi1[i] + h * d.psi1[i];
      out.psi2[i] = base.psi2[i] + h * d.psi2[i];
    }
    out.alpha1 = base.alpha1 + h * d.alpha1;
    out.alpha2 = base.alpha2 + h * d.alpha2;
  };

  rhs(s, d1);
  axpy(s, d1, dt_ / 2, y);
  rhs(y, d2);
  axpy(s, d2, dt_ / 2, y);
  rhs(y, d3);
  axpy(s, d3, dt_, y);
  rhs(y, d4);
  const double w = dt_ / 6.0;
  for (int i = 0; i < n; ++i) {
    s.psi1[i] += w * (d1.psi1[i] + 2.0 * d2.psi1[i] + 2.0 * d3.psi1[i] +
                      d4.psi1[i]);
    s.psi2[i] += w * (d1.psi2[i] + 2.0 * d2.psi2[i] + 2.0 * d3.psi2[i] +
                      d4.psi2[i]);
  }
  s.alpha1 += w * (d1.alpha1 + 2.0 * d2.alpha1 + 2.0 * d3.alpha1 + d4.alpha1);
  s.alpha2 += w * (d1.alpha2 + 2.0 * d2.alpha2 + 2.0 * d3.alpha2 + d4.alpha2);
}

SystemState step(const SystemState& s, const PhysicalParams& p, const Grid& g,
                 const StepConfig& cfg) {
  Stepper st(p, g, cfg);
  return st.step(s);
}

namespace {

TimeSeries evolve_impl(SystemState& s, const PhysicalParams& p, const Grid& g,
                       const StepConfig& cfg, double t_final,
                       const NoiseConfig* noise, Rng* rng,
                       const std::function<void(const SystemState&)>& recorder) {
  if (t_final < s.time)
    throw ConfigError("evolve: t_final must be >= state.time");
  TimeSeries ts;
  auto sample = [&](const SystemState& st) {
    PseudoSpin ps = pseudo_spin(st, g);
    ts.push(st.time, ps.sz, std::norm(st.alpha1), std::norm(st.alpha2),
            relative_phase(st, g));
    if (recorder) recorder(st);
  };
  double span = t_final - s.time;
  if (span == 0.0) {
    sample(s);
    return ts;
  }
  double dt0 = cfg.dt > 0 ? cfg.dt : default_dt(p);
  long long nsteps = std::max(1LL, static_cast<long long>(std::ceil(
                                       span / dt0 - 1e-9)));
  StepConfig eff = cfg;
  eff.dt = span / nsteps;  // exact fit, never larger than requested
  Stepper st(p, g, eff);
  if (noise && rng) st.set_noise(*noise, rng);
  sample(s);
  try {
    for (long long i = 1; i <= nsteps; ++i) {
      s = st.step(s);
      if (i % cfg.record_every == 0 || i == nsteps) sample(s);
    }
  } catch (const NumericalError& e) {
    std::ostringstream os;
    os << e.what() << " (evolution started at t = " << t_final - span << ")";
    throw NumericalError(os.str());
  }
  return ts;
}

}  // namespace

TimeSeries evolve(SystemState& s, const PhysicalParams& p, const Grid& g,
                  const StepConfig& cfg, double t_final,
                  const std::function<void(const SystemState&)>& recorder) {
  return evolve_impl(s, p, g, cfg, t_final, nullptr, nullptr, recorder);
}

TimeSeries evolve(SystemState& s, const PhysicalParams& p, const Grid& g,
                  const StepConfig& cfg, double t_final,
                  const NoiseConfig& noise, Rng& rng,
                  const std::function<void(const SystemState&)>& recorder) {
  return evolve_impl(s, p, g, cfg, t_final, &noise, &rng, recorder);
}

}  // namespace cavmag
