#include "cavmag/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "cavmag/analytics.hpp"
#include "cavmag/cavity.hpp"
#include "cavmag/errors.hpp"
#include "cavmag/overlaps.hpp"
#include "cavmag/prepare.hpp"
#include "cavmag/stepper.hpp"

namespace cavmag {

namespace {

// A handful of photons separates the lit self-ordered state from vacuum; a
// record below this carries no field information.
constexpr double kPhotonFloor = 1.0;

void require_superradiant(const PhysicalParams& p) {
  if (!(steady_state_photons(p) > kPhotonFloor))
    throw EstimationError(
        "protocol needs a self-ordered pump: expected photon number is below "
        "the detection floor");
}

double component_atoms(const std::vector<std::complex<double>>& psi,
                       const Grid& g) {
  double s = 0;
  for (const auto& v : psi) s += std::norm(v);
  return s * g.spacing;
}

}  // namespace

std::pair<PhotonRecord, SystemState> run_ramsey(const PhysicalParams& p,
                                                const Grid& g,
                                                const RamseyConfig& cfg,
                                                Rng& rng) {
  if (!(cfg.tau > 0) || !(cfg.t_meas > 0) || !(cfg.t_cycle > 0))
    throw ConfigError("run_ramsey: times must be positive");
  if (cfg.tau + cfg.t_meas > cfg.t_cycle * (1.0 + 1e-12))
    throw ConfigError("run_ramsey: tau + t_meas must fit within t_cycle");
  if (!std::isfinite(cfg.b_true))
    throw ConfigError("run_ramsey: b_true must be finite");
  require_superradiant(p);

  const double N = p.n_atoms;
  const double wr = p.omega_r_hz;
  SystemState s = spin_state(p, g, 0.5 * M_PI, 0.0);

  if (cfg.interrogation == Interrogation::analytic) {
    const double phi = p.gamma_gyro * cfg.b_true * cfg.tau;
    const std::complex<double> ph(std::cos(phi), std::sin(phi));
    for (auto& v : s.psi1) v *= ph;
    s.time = cfg.tau * wr;
  } else {
    // Timed pump-off evolution; the dressing fields are off too, so the only
    // phase accrued is the Zeeman one.
    PhysicalParams quiet = p;
    quiet.eta0 = 0.0;
    quiet.b_perp = 0.0;
    quiet.omega_ac = 0.0;
    quiet.delta = 0.0;
    quiet.b_parallel = cfg.b_true;
    StepConfig sc;
    evolve(s, quiet, g, sc, cfg.tau * wr);
  }

  // Conversion pulse: maps the accrued phase onto the population imbalance,
  // deltaN = N cos(phi).
  s = apply_rotation(s, Axis::y, -0.5 * M_PI);

  const double n1_atoms = component_atoms(s.psi1, g);
  const double n2_atoms = component_atoms(s.psi2, g);
  const double kl = p.kappa_lab();
  double lam1, lam2;
  if (cfg.readout == Readout::model) {
    // Each component holds its mode at the self-ordered working point; the
    // emission rate scales with the square of its atom number.
    const double n_ss = steady_state_photons(p);
    lam1 = kl * cfg.t_meas * n_ss * (n1_atoms / N) * (n1_atoms / N);
    lam2 = kl * cfg.t_meas * n_ss * (n2_atoms / N) * (n2_atoms / N);
  } else {
    // Rebuild the measured populations on the relaxed lattice profile and
    // integrate the cavity modes over a stationary window; the window average
    // extrapolates to the full collection time.
    PhysicalParams meas = p;
    meas.b_perp = 0.0;
    SystemState ord = ordered_state(meas, g);
    SystemState ms;
    ms.psi1 = ord.psi1;
    ms.psi2 = ord.psi1;
    const double sc1 = std::sqrt(n1_atoms / N), sc2 = std::sqrt(n2_atoms / N);
    for (auto& v : ms.psi1) v *= sc1;
    for (auto& v : ms.psi2) v *= sc2;
    Overlaps ov = overlaps(ms, g);
    ms.alpha1 = cavity_fixed_point(ov.c1[0], ov.c2[0], meas);
    ms.alpha2 = cavity_fixed_point(ov.c1[1], ov.c2[1], meas);

    StepConfig scfg;
    scfg.dt = deep_lattice_dt(meas, ms);
    scfg.record_every = 32;
    const double window = std::min(cfg.t_meas * wr, 0.05);
    TimeSeries ts = evolve(ms, meas, g, scfg, window);
    double m1 = 0, m2 = 0;
    for (std::size_t k = 0; k < ts.t.size(); ++k) {
      m1 += ts.n1[k];
      m2 += ts.n2[k];
    }
    m1 /= static_cast<double>(ts.t.size());
    m2 /= static_cast<double>(ts.t.size());
    lam1 = kl * cfg.t_meas * m1;
    lam2 = kl * cfg.t_meas * m2;
  }

  PhotonRecord rec;
  double dn;
  if (cfg.shot_noise) {
    dn = static_cast<double>(rng.poisson(lam1)) -
         static_cast<double>(rng.poisson(lam2));
    rec.shot_noise_applied = true;
  } else {
    dn = lam1 - lam2;
  }
  rec.samples.push_back({cfg.tau + cfg.t_meas, dn});

  s.alpha1 = cavity_fixed_point(-n1_atoms, n1_atoms, p);
  s.alpha2 = cavity_fixed_point(-n2_atoms, n2_atoms, p);
  return {rec, s};
}

PhotonRecord run_rabi(const PhysicalParams& p, const Grid& g,
                      const RabiConfig& cfg, Rng& rng) {
  if (!(cfg.duration > 0) || !(cfg.dt_window > 0))
    throw ConfigError("run_rabi: duration and dt_window must be positive");
  if (cfg.dt_window > cfg.duration)
    throw ConfigError("run_rabi: dt_window must not exceed duration");
  if (!(cfg.b_true >= 0) || !std::isfinite(cfg.b_true))
    throw ConfigError("run_rabi: b_true must be a finite amplitude");
  require_superradiant(p);

  PhysicalParams drive = p;
  drive.b_perp = cfg.b_true;
  // Resonant addressing: the two-photon detuning cancels the parallel Zeeman
  // shift and the transverse-field oscillation frequency.
  drive.delta = -(drive.zeeman_parallel() + drive.omega_ac);

  const double wr = p.omega_r_hz;
  const double omega = drive.rabi_frequency();
  const double dur_rec = cfg.duration * wr;
  const double win_rec = cfg.dt_window * wr;
  if (omega > 0 && win_rec * omega > 1.0)
    throw ConfigError(
        "run_rabi: dt_window must stay well under an oscillation period");

  SystemState s = ordered_state(drive, g);
  StepConfig sc;
  double dt0 = deep_lattice_dt(drive, s);
  int per = std::max(1, static_cast<int>(std::ceil(win_rec / dt0 - 1e-9)));
  sc.dt = win_rec / per;
  sc.record_every = per;

  const double kl = p.kappa_lab();
  PhotonRecord rec;
  rec.shot_noise_applied = cfg.shot_noise;
  auto detect = [&](const SystemState& st) {
    const double r1 = kl * cfg.dt_window * std::norm(st.alpha1);
    const double r2 = kl * cfg.dt_window * std::norm(st.alpha2);
    double dn;
    if (cfg.shot_noise)
      dn = static_cast<double>(rng.poisson(r1)) -
           static_cast<double>(rng.poisson(r2));
    else
      dn = r1 - r2;
    rec.samples.push_back({st.time / wr, dn});
  };
  evolve(s, drive, g, sc, dur_rec, detect);
  return rec;
}

BEstimate estimate_b_parallel(const PhotonRecord& record,
                              const PhysicalParams& p,
                              const RamseyConfig& cfg) {
  if (record.samples.empty())
    throw ConfigError("estimate_b_parallel: empty record");
  if (!(cfg.tau > 0) || !(cfg.t_meas > 0))
    throw ConfigError("estimate_b_parallel: times must be positive");
  if (!(p.gamma_gyro > 0))
    throw EstimationError(
        "estimate_b_parallel: zero gyromagnetic ratio carries no field "
        "information");
  const double n_ss = steady_state_photons(p);
  if (!(n_ss > kPhotonFloor))
    throw EstimationError(
        "estimate_b_parallel: expected photon number is below the detection "
        "floor");
  const double kt = p.kappa_lab() * cfg.t_meas;
  double ratio = record.samples.back().second / (kt * n_ss);
  BEstimate est;
  if (ratio > 1.0) {
    ratio = 1.0;
    est.clipped = true;
  } else if (ratio < -1.0) {
    ratio = -1.0;
    est.clipped = true;
  }
  const double phi = std::acos(ratio);
  est.b = phi / (p.gamma_gyro * cfg.tau);
  const double sp = std::abs(std::sin(phi));
  const double slope =
      p.gamma_gyro * cfg.tau * std::sqrt(kt * n_ss) * sp;  // d(alpha)/dB
  est.uncertainty =
      slope > 0 ? 1.0 / slope : std::numeric_limits<double>::infinity();
  est.divergent = sp < 1e-3;
  return est;
}

namespace {

// Explained variance of a cos/sin pair at angular frequency w fitted to the
// de-meaned samples, via the 2x2 normal equations.
double projected_power(const std::vector<double>& t,
                       const std::vector<double>& x, double w) {
  double cc = 0, ss = 0, cs = 0, xc = 0, xs = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double c = std::cos(w * t[i]);
    const double s = std::sin(w * t[i]);
    cc += c * c;
    ss += s * s;
    cs += c * s;
    xc += x[i] * c;
    xs += x[i] * s;
  }
  const double det = cc * ss - cs * cs;
  if (!(det > 1e-12 * cc * ss)) return 0.0;
  return (ss * xc * xc - 2.0 * cs * xc * xs + cc * xs * xs) / det;
}

double golden_max(const std::vector<double>& t, const std::vector<double>& x,
                  double lo, double hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = projected_power(t, x, c);
  double fd = projected_power(t, x, d);
  for (int it = 0; it < 120 && (b - a) > 1e-14 * hi; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = projected_power(t, x, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = projected_power(t, x, d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

BEstimate estimate_b_perp(const PhotonRecord& record,
                          const PhysicalParams& p) {
  if (!(p.gamma_gyro > 0))
    throw EstimationError(
        "estimate_b_perp: zero gyromagnetic ratio carries no field "
        "information");
  const auto& smp = record.samples;
  if (smp.size() < 16)
    throw EstimationError("estimate_b_perp: record too short for a fit");
  std::vector<double> t(smp.size()), x(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) {
    t[i] = smp[i].first;
    x[i] = smp[i].second;
    if (i > 0 && !(t[i] > t[i - 1]))
      throw ConfigError("estimate_b_perp: timestamps must increase");
  }

  std::vector<double> gaps(t.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) gaps[i] = t[i + 1] - t[i];
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  const double dt_med = gaps[gaps.size() / 2];
  // Drop an irregular trailing sample so the periodogram sees a uniform grid.
  std::size_t n = t.size();
  if (std::abs((t[n - 1] - t[n - 2]) - dt_med) > 0.01 * dt_med) --n;
  if (n < 16)
    throw EstimationError("estimate_b_perp: record too short for a fit");

  double mean = 0, peak_abs = 0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i];
  mean /= static_cast<double>(n);
  double rms_ac = 0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] -= mean;
    rms_ac += x[i] * x[i];
    peak_abs = std::max(peak_abs, std::abs(x[i]));
  }
  rms_ac = std::sqrt(rms_ac / static_cast<double>(n));
  if (!(rms_ac > 1e-9 * std::max({1.0, std::abs(mean), peak_abs})))
    throw EstimationError("estimate_b_perp: record shows no oscillation");

  const std::size_t half = n / 2;
  std::vector<double> power(half + 1, 0.0);
  for (std::size_t k = 1; k <= half; ++k) {
    double re = 0, im = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = 2.0 * M_PI * static_cast<double>(j * k) /
                       static_cast<double>(n);
      re += x[j] * std::cos(a);
      im -= x[j] * std::sin(a);
    }
    power[k] = re * re + im * im;
  }
  std::size_t kpk = 1;
  for (std::size_t k = 2; k <= half; ++k)
    if (power[k] > power[kpk]) kpk = k;
  std::vector<double> sorted(power.begin() + 1, power.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double med_power = sorted[sorted.size() / 2];
  if (power[kpk] < 5.0 * med_power)
    throw EstimationError(
        "estimate_b_perp: no spectral peak above the noise floor");
  if (kpk < 2)
    throw EstimationError(
        "estimate_b_perp: record spans fewer than two oscillation periods");

  const double wbin = 2.0 * M_PI / (static_cast<double>(n) * dt_med);
  std::vector<double> tt(t.begin(), t.begin() + n);
  std::vector<double> xx(x.begin(), x.begin() + n);
  const double omega = golden_max(tt, xx, (kpk - 1) * wbin, (kpk + 1) * wbin);

  BEstimate est;
  est.b = omega / p.gamma_gyro;
  const double t_end = tt.back();
  const double alpha0 = std::sqrt(steady_state_photons(p));
  const double sfac = std::abs(std::sin(omega * t_end));
  const double slope = p.gamma_gyro * t_end *
                       std::sqrt(p.kappa_lab() * dt_med) * alpha0 * sfac;
  est.uncertainty =
      slope > 0 ? 1.0 / slope : std::numeric_limits<double>::infinity();
  est.divergent = sfac < 1e-3;
  return est;
}

}  // namespace cavmag
