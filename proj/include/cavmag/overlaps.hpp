#pragma once
// Spatial overlaps of the component densities with the cavity mode profile:
// c1_j = integral |psi_j|^2 cos(k_c x), c2_j = integral |psi_j|^2 cos^2(k_c x).
#include <cmath>

#include "cavmag/grid.hpp"
#include "cavmag/state.hpp"

namespace cavmag {

struct Overlaps {
  double c1[2] = {0, 0};  // [atoms], in [-N_j, N_j]
  double c2[2] = {0, 0};  // [atoms], in [0, N_j]
};

inline Overlaps overlaps(const SystemState& s, const Grid& g) {
  Overlaps ov;
  for (int i = 0; i < g.n_points; ++i) {
    double c = std::cos(g.x[i]);
    double d1 = std::norm(s.psi1[i]);
    double d2 = std::norm(s.psi2[i]);
    ov.c1[0] += d1 * c;
    ov.c2[0] += d1 * c * c;
    ov.c1[1] += d2 * c;
    ov.c2[1] += d2 * c * c;
  }
  for (int j = 0; j < 2; ++j) {
    ov.c1[j] *= g.spacing;
    ov.c2[j] *= g.spacing;
  }
  return ov;
}

}  // namespace cavmag
