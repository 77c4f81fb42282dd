#include "cavmag/grid.hpp"

#include <numbers>
#include <sstream>

#include "cavmag/errors.hpp"

namespace cavmag {

Grid make_grid(int periods, int n_points) {
  if (periods < 1) throw ConfigError("make_grid: periods must be >= 1");
  if (n_points < 1 || (n_points & (n_points - 1)) != 0) {
    std::ostringstream os;
    os << "make_grid: n_points = " << n_points << " is not a power of two";
    throw ConfigError(os.str());
  }
  if (n_points < 8 * periods) {
    std::ostringstream os;
    os << "make_grid: " << n_points << " points over " << periods
       << " periods is fewer than 8 points per wavelength (cos^2 terms alias)";
    throw ConfigError(os.str());
  }
  Grid g;
  g.n_points = n_points;
  g.periods = periods;
  g.length = 2.0 * std::numbers::pi * periods;
  g.spacing = g.length / n_points;
  g.x.resize(n_points);
  g.wavenumbers.resize(n_points);
  const double dk = 2.0 * std::numbers::pi / g.length;
  for (int i = 0; i < n_points; ++i) {
    g.x[i] = i * g.spacing;
    int m = (i <= n_points / 2) ? i : i - n_points;
    g.wavenumbers[i] = dk * m;
  }
  return g;
}

}  // namespace cavmag
