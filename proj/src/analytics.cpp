#include "cavmag/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cavmag/errors.hpp"

namespace cavmag {

namespace {

// Quadrature weights of the closed-form photon imbalance
//   delta_n(theta) = pref * (S sin(theta) + C cos(theta)) / den.
struct DeltaNModel {
  double s, c, den, pref;
};

DeltaNModel delta_n_model(double omega, const PhysicalParams& p) {
  const double dc2 = p.delta_c * p.delta_c;
  const double k2 = p.kappa * p.kappa;
  const double w2 = omega * omega;
  DeltaNModel m;
  m.s = p.kappa * omega * (dc2 + k2 + w2);
  m.c = (dc2 + k2) * (dc2 + k2) + w2 * (k2 - dc2);
  m.den = (dc2 + k2) * ((p.delta_c - omega) * (p.delta_c - omega) + k2) *
          ((p.delta_c + omega) * (p.delta_c + omega) + k2);
  m.pref = p.n_atoms * p.n_atoms * p.eta0 * p.eta0;
  return m;
}

}  // namespace

double steady_state_photons(const PhysicalParams& p) {
  const double num = p.n_atoms * p.eta0;
  const double shifted = p.delta_c - p.n_atoms * p.u0;
  return num * num / (shifted * shifted + p.kappa * p.kappa);
}

std::pair<std::complex<double>, std::complex<double>> analytic_cavity_fields(
    double t, double omega, double t0, const PhysicalParams& p) {
  using C = std::complex<double>;
  const C D(p.delta_c, p.kappa);
  const double th = omega * (t - t0);
  const C D2 = D * D;
  const C den = 2.0 * D * (D2 - omega * omega);
  const C common = C(omega * omega, 0.0) - D2;
  const C osc = C(0.0, omega) * D * std::sin(th) + D2 * std::cos(th);
  const double pref = p.n_atoms * p.eta0;
  return {pref * (common - osc) / den, pref * (common + osc) / den};
}

double analytic_delta_n(double t, double omega, double t0,
                        const PhysicalParams& p) {
  const DeltaNModel m = delta_n_model(omega, p);
  const double th = omega * (t - t0);
  return m.pref * (m.s * std::sin(th) + m.c * std::cos(th)) / m.den;
}

double model_phase_lag(double omega, const PhysicalParams& p) {
  const DeltaNModel m = delta_n_model(omega, p);
  // S >= 0 for omega >= 0, so atan2 already lands in [0, pi].
  return std::atan2(m.s, m.c);
}

double model_delta_n_amplitude(double omega, const PhysicalParams& p) {
  const DeltaNModel m = delta_n_model(omega, p);
  return m.pref * std::hypot(m.s, m.c) / m.den;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::adiabatic:
      return "adiabatic";
    case Regime::resonant:
      return "resonant";
    case Regime::fast:
      return "fast";
  }
  return "unknown";
}

RegimeReport classify_regime(double omega, const PhysicalParams& p) {
  if (omega < 0) throw ConfigError("classify_regime: omega must be >= 0");
  const double dc = std::abs(p.delta_c);
  RegimeReport r;
  if (omega < 0.5 * dc) {
    r.regime = Regime::adiabatic;
    r.predicted_lag = 0.0;
  } else if (omega <= 2.0 * dc) {
    r.regime = Regime::resonant;
    r.predicted_lag = 0.5 * M_PI;
  } else {
    r.regime = Regime::fast;
    r.predicted_lag = M_PI;
  }
  r.amplitude_model = model_delta_n_amplitude(omega, p);
  return r;
}

double phase_lag(const std::vector<double>& t, const std::vector<double>& a,
                 const std::vector<double>& b, double omega) {
  if (!(omega > 0)) throw ConfigError("phase_lag: omega must be > 0");
  if (t.size() != a.size() || t.size() != b.size())
    throw ConfigError("phase_lag: channels must share the time grid");
  if (t.size() < 8) throw EstimationError("phase_lag: too few samples");
  const double period = 2.0 * M_PI / omega;
  const double span = t.back() - t.front();
  if (!(span >= 3.0 * period * (1.0 - 1e-9)))
    throw EstimationError("phase_lag: need at least 3 periods of data");

  // Truncate to a whole number of periods so the projection is unbiased by a
  // partial cycle at the end.
  const double nper = std::floor(span / period * (1.0 + 1e-12));
  const double t_end = t.front() + nper * period;
  std::size_t last = t.size() - 1;
  while (last > 0 && t[last] > t_end * (1.0 + 1e-12) + 1e-300) --last;
  if (last < 7) throw EstimationError("phase_lag: too few samples per period");

  // Trapezoid weights tolerate the occasional irregular final sample.
  auto weight = [&](std::size_t i) {
    const double lo = i == 0 ? t[0] : t[i - 1];
    const double hi = i == last ? t[last] : t[i + 1];
    return 0.5 * (hi - lo);
  };
  double wsum = 0, mean_a = 0, mean_b = 0;
  for (std::size_t i = 0; i <= last; ++i) {
    const double w = weight(i);
    wsum += w;
    mean_a += w * a[i];
    mean_b += w * b[i];
  }
  mean_a /= wsum;
  mean_b /= wsum;

  double ca = 0, sa = 0, cb = 0, sb = 0, var_a = 0, var_b = 0;
  for (std::size_t i = 0; i <= last; ++i) {
    const double w = weight(i);
    const double cw = std::cos(omega * t[i]);
    const double sw = std::sin(omega * t[i]);
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    ca += w * da * cw;
    sa += w * da * sw;
    cb += w * db * cw;
    sb += w * db * sw;
    var_a += w * da * da;
    var_b += w * db * db;
  }
  var_a /= wsum;
  var_b /= wsum;
  // For f = A cos(omega t - phi), the projections give (A/2)(cos phi, sin phi).
  const double amp_a = 2.0 * std::hypot(ca, sa) / wsum;
  const double amp_b = 2.0 * std::hypot(cb, sb) / wsum;
  if (!(amp_a * amp_a > 1e-12 * 2.0 * var_a) || var_a == 0)
    throw EstimationError("phase_lag: channel a has no power at omega");
  if (!(amp_b * amp_b > 1e-12 * 2.0 * var_b) || var_b == 0)
    throw EstimationError("phase_lag: channel b has no power at omega");

  const double phi_a = std::atan2(sa, ca);
  const double phi_b = std::atan2(sb, cb);
  return std::abs(std::remainder(phi_b - phi_a, 2.0 * M_PI));
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ramsey:
      return "ramsey";
    case Scheme::rabi:
      return "rabi";
    case Scheme::single_mode:
      return "single-mode";
  }
  return "unknown";
}

namespace {

void check_positive_times(const char* who, std::initializer_list<double> ts) {
  for (double v : ts)
    if (!(v > 0) || !std::isfinite(v))
      throw ConfigError(std::string(who) + ": times must be positive");
}

}  // namespace

SensitivityReport sensitivity_ramsey(const PhysicalParams& p, double tau,
                                     double t_meas, double t_cycle) {
  check_positive_times("sensitivity_ramsey", {tau, t_meas, t_cycle});
  const double alpha0 = std::sqrt(steady_state_photons(p));
  const double kl = p.kappa_lab();
  const double slope = p.gamma_gyro * tau * std::sqrt(kl * t_meas) * alpha0;
  SensitivityReport r;
  r.scheme = Scheme::ramsey;
  r.qfi = slope * slope;
  r.bound = std::sqrt(t_cycle) / slope;
  r.inputs = {{"tau", tau},           {"t_meas", t_meas},
              {"t_cycle", t_cycle},   {"alpha0", alpha0},
              {"kappa_lab", kl},      {"gamma_gyro", p.gamma_gyro}};
  return r;
}

SensitivityReport sensitivity_rabi(const PhysicalParams& p, double t,
                                   double dt_window, double t_cycle) {
  check_positive_times("sensitivity_rabi", {t, dt_window, t_cycle});
  const double alpha0 = std::sqrt(steady_state_photons(p));
  const double kl = p.kappa_lab();
  const double slope = p.gamma_gyro * t * std::sqrt(kl * dt_window) * alpha0;
  SensitivityReport r;
  r.scheme = Scheme::rabi;
  r.qfi = slope * slope;
  r.bound = std::sqrt(t_cycle) / slope;
  r.inputs = {{"t", t},             {"dt_window", dt_window},
              {"t_cycle", t_cycle}, {"alpha0", alpha0},
              {"kappa_lab", kl},    {"gamma_gyro", p.gamma_gyro}};
  return r;
}

double qfi_bound(double d_alpha_d_b, Scheme) {
  const double fq = d_alpha_d_b * d_alpha_d_b;
  if (fq == 0) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(fq);
}

double ramsey_model_alpha(const PhysicalParams& p, double tau, double t_meas,
                          double b) {
  const double alpha0 = std::sqrt(steady_state_photons(p));
  return alpha0 * std::sqrt(p.kappa_lab() * t_meas) *
         std::cos(p.gamma_gyro * b * tau);
}

double rabi_model_alpha(const PhysicalParams& p, double t, double dt_window,
                        double b) {
  const double alpha0 = std::sqrt(steady_state_photons(p));
  return alpha0 * std::sqrt(p.kappa_lab() * dt_window) *
         std::cos(p.gamma_gyro * b * t);
}

double single_mode_model(double phi, const PhysicalParams& p, int branch) {
  if (branch != 1 && branch != -1)
    throw ConfigError("single_mode_model: branch must be +1 or -1");
  const double alpha0 = std::sqrt(steady_state_photons(p));
  return 0.5 * alpha0 * (1.0 + branch * std::cos(phi));
}

ScalingFit scaling_fit(const std::vector<double>& n_values,
                       const std::vector<double>& bounds) {
  if (n_values.size() != bounds.size())
    throw ConfigError("scaling_fit: value lists must have equal length");
  const std::size_t m = n_values.size();
  if (m < 3) throw ConfigError("scaling_fit: need at least 3 points");
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(n_values[i] > 0) || !(bounds[i] > 0))
      throw ConfigError("scaling_fit: values must be positive");
    x[i] = std::log(n_values[i]);
    y[i] = std::log(bounds[i]);
  }
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  if ((*xmax - *xmin) / std::log(10.0) < 1.5 * (1.0 - 1e-12))
    throw ConfigError("scaling_fit: N must span at least 1.5 decades");

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  double ssr = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double resid = y[i] - my - fit.exponent * (x[i] - mx);
    ssr += resid * resid;
  }
  fit.confidence = m > 2 ? std::sqrt(ssr / (m - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace cavmag
