#include "cavmag/prepare.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "cavmag/cavity.hpp"
#include "cavmag/errors.hpp"
#include "cavmag/fft.hpp"

namespace cavmag {

SystemState ordered_state(const PhysicalParams& p, const Grid& g, int branch,
                          const PrepareOptions& opt) {
  if (branch != 1 && branch != -1)
    throw ConfigError("ordered_state: branch must be +1 or -1");
  const int n = g.n_points;
  const double N = p.n_atoms;
  const double sgn = branch;  // +1: localize where cos = -1

  std::vector<double> cosx(n), cos2x(n);
  for (int i = 0; i < n; ++i) {
    cosx[i] = std::cos(g.x[i]);
    cos2x[i] = cosx[i] * cosx[i];
  }

  // Moderately bunched seed; the exponent is bounded above by 0 so there is
  // no overflow however tight the profile.
  std::vector<std::complex<double>> psi(n);
  for (int i = 0; i < n; ++i)
    psi[i] = std::exp(-25.0 * (1.0 + sgn * cosx[i]));

  auto renorm = [&]() {
    double s = 0;
    for (auto& v : psi) s += std::norm(v);
    s *= g.spacing;
    double scale = std::sqrt(N / s);
    for (auto& v : psi) v *= scale;
  };
  renorm();

  double dtau = opt.dtau;
  if (dtau <= 0) {
    double depth =
        2.0 * std::abs(p.eta0) *
        std::abs(cavity_fixed_point(-sgn * N, N, p).real());
    dtau = std::min(0.2 / std::max(depth, 1.0), 1e-3);
  }

  Fft fft(n);
  std::vector<double> kin(n);
  for (int i = 0; i < n; ++i) {
    double k2 = g.wavenumbers[i] * g.wavenumbers[i];
    kin[i] = std::exp(-k2 * dtau);
  }

  double last_c1 = 0;
  bool have_last = false;
  std::complex<double> alpha = 0;
  for (int it = 0; it < opt.max_iter; ++it) {
    double c1 = 0, c2 = 0;
    for (int i = 0; i < n; ++i) {
      double d = std::norm(psi[i]);
      c1 += d * cosx[i];
      c2 += d * cos2x[i];
    }
    c1 *= g.spacing;
    c2 *= g.spacing;
    alpha = cavity_fixed_point(c1, c2, p);
    double ar = std::norm(alpha);
    double are = alpha.real();
    for (int i = 0; i < n; ++i) {
      double v = p.u0 * ar * cos2x[i] + 2.0 * p.eta0 * are * cosx[i];
      psi[i] *= std::exp(-v * dtau);
    }
    fft.forward(psi);
    for (int i = 0; i < n; ++i) psi[i] *= kin[i];
    fft.inverse(psi);
    renorm();
    if (it % opt.check_every == 0) {
      if (have_last &&
          std::abs(c1 - last_c1) < opt.tol * std::max(std::abs(c1), 1e-6 * N))
        break;
      last_c1 = c1;
      have_last = true;
    }
  }

  SystemState s;
  s.psi1 = std::move(psi);
  s.psi2.assign(n, std::complex<double>(0.0, 0.0));
  // Final slaved cavity amplitude for the converged profile.
  double c1 = 0, c2 = 0;
  for (int i = 0; i < n; ++i) {
    double d = std::norm(s.psi1[i]);
    c1 += d * cosx[i];
    c2 += d * cos2x[i];
  }
  s.alpha1 = cavity_fixed_point(c1 * g.spacing, c2 * g.spacing, p);
  s.alpha2 = 0;
  s.time = 0;
  return s;
}

}  // namespace cavmag
