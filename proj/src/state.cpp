#include "cavmag/state.hpp"

#include <cmath>

#include "cavmag/errors.hpp"

namespace cavmag {

namespace {

void check_grid_match(const SystemState& s, const Grid& g) {
  if (s.psi1.size() != static_cast<size_t>(g.n_points) ||
      s.psi2.size() != static_cast<size_t>(g.n_points))
    throw ConfigError("state and grid sizes do not match");
}

}  // namespace

SystemState initial_state(const PhysicalParams& p, const Grid& g,
                          double seed_amplitude) {
  if (std::abs(seed_amplitude) >= 1.0)
    throw ConfigError(
        "initial_state: |seed_amplitude| must be < 1 (the modulation would "
        "dominate the uniform density)");
  SystemState s;
  s.psi1.resize(g.n_points);
  s.psi2.resize(g.n_points);
  const double rho0 = p.n_atoms / (2.0 * g.length);  // atoms/length per component
  for (int i = 0; i < g.n_points; ++i) {
    double rho = rho0 * (1.0 + seed_amplitude * std::cos(g.x[i]));
    double a = std::sqrt(rho);
    s.psi1[i] = a;
    s.psi2[i] = a;
  }
  // The cosine sums to zero over whole periods, but renormalize anyway so the
  // norm equals N to the last bit.
  double norm = total_norm(s, g);
  double scale = std::sqrt(p.n_atoms / norm);
  for (auto& v : s.psi1) v *= scale;
  for (auto& v : s.psi2) v *= scale;
  return s;
}

SystemState spin_state(const PhysicalParams& p, const Grid& g, double theta,
                       double phi) {
  SystemState s;
  s.psi1.resize(g.n_points);
  s.psi2.resize(g.n_points);
  const double amp = std::sqrt(p.n_atoms / g.length);
  const std::complex<double> a1 =
      amp * std::cos(theta / 2.0) *
      std::exp(std::complex<double>(0.0, -phi));
  const std::complex<double> a2 = amp * std::sin(theta / 2.0);
  for (int i = 0; i < g.n_points; ++i) {
    s.psi1[i] = a1;
    s.psi2[i] = a2;
  }
  return s;
}

PseudoSpin pseudo_spin(const SystemState& s, const Grid& g) {
  check_grid_match(s, g);
  double n1 = 0, n2 = 0;
  std::complex<double> cross = 0;
  for (int i = 0; i < g.n_points; ++i) {
    n1 += std::norm(s.psi1[i]);
    n2 += std::norm(s.psi2[i]);
    cross += std::conj(s.psi1[i]) * s.psi2[i];
  }
  n1 *= g.spacing;
  n2 *= g.spacing;
  cross *= g.spacing;
  PseudoSpin ps;
  ps.sx = 2.0 * cross.real();
  ps.sy = 2.0 * cross.imag();
  ps.sz = n1 - n2;
  return ps;
}

SystemState apply_rotation(const SystemState& s, Axis axis, double angle) {
  double c = std::cos(angle / 2.0);
  double sn = std::sin(angle / 2.0);
  // U = cos(angle/2) I - i sin(angle/2) n.sigma
  std::complex<double> u11, u12, u21, u22;
  const std::complex<double> I(0.0, 1.0);
  switch (axis) {
    case Axis::x:
      u11 = c;      u12 = -I * sn;
      u21 = -I * sn; u22 = c;
      break;
    case Axis::y:
      u11 = c;   u12 = -sn;
      u21 = sn;  u22 = c;
      break;
    case Axis::z:
      u11 = c - I * sn; u12 = 0;
      u21 = 0;          u22 = c + I * sn;
      break;
  }
  SystemState out = s;
  for (size_t i = 0; i < s.psi1.size(); ++i) {
    auto p1 = s.psi1[i];
    auto p2 = s.psi2[i];
    out.psi1[i] = u11 * p1 + u12 * p2;
    out.psi2[i] = u21 * p1 + u22 * p2;
  }
  return out;
}

double total_norm(const SystemState& s, const Grid& g) {
  double n = 0;
  for (size_t i = 0; i < s.psi1.size(); ++i)
    n += std::norm(s.psi1[i]) + std::norm(s.psi2[i]);
  return n * g.spacing;
}

double relative_phase(const SystemState& s, const Grid& g) {
  std::complex<double> cross = 0;
  for (size_t i = 0; i < s.psi1.size(); ++i)
    cross += std::conj(s.psi1[i]) * s.psi2[i];
  cross *= g.spacing;
  if (cross == std::complex<double>(0.0, 0.0)) return 0.0;
  return std::arg(cross);
}

}  // namespace cavmag
