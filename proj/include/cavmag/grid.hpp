#pragma once
// Periodic spatial grid covering an integer number of lattice periods
// 2 pi / k_c, with FFT-ordered spectral wavenumbers.
#include <vector>

namespace cavmag {

struct Grid {
  int n_points = 0;
  int periods = 0;
  double length = 0;   // [1/k_c]
  double spacing = 0;  // [1/k_c]
  std::vector<double> wavenumbers;  // [k_c], FFT layout
  std::vector<double> x;            // sample positions [1/k_c]
};

// periods >= 1, n_points a power of two with >= 8 points per lattice period.
Grid make_grid(int periods, int n_points);

}  // namespace cavmag
