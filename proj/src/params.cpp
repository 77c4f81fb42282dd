#include "cavmag/params.hpp"

#include <cmath>
#include <sstream>

#include "cavmag/errors.hpp"

namespace cavmag {

std::vector<std::string> PhysicalParams::violations() const {
  std::vector<std::string> v;
  if (!(kappa > 0)) v.push_back("kappa must be > 0");
  if (!(n_atoms > 0)) v.push_back("n_atoms must be > 0");
  if (!(epsilon >= 0 && epsilon <= 1)) v.push_back("epsilon must be in [0,1]");
  if (!(omega_r_hz > 0)) v.push_back("omega_r_hz must be > 0");
  if (!(gamma_gyro >= 0)) v.push_back("gamma_gyro must be >= 0");
  if (!(b_perp >= 0)) v.push_back("b_perp must be >= 0");
  if (!(omega_ac >= 0)) v.push_back("omega_ac must be >= 0");
  double om = gamma_gyro * b_perp / omega_r_hz;
  if (!std::isfinite(om) || om < 0)
    v.push_back("derived Rabi frequency gamma_gyro*b_perp/omega_r_hz must be finite and >= 0");
  for (double x : {delta_c, u0, eta0, delta, b_parallel}) {
    if (!std::isfinite(x)) {
      v.push_back("all parameters must be finite");
      break;
    }
  }
  return v;
}

void PhysicalParams::validate() const {
  auto v = violations();
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid parameters:";
  for (const auto& s : v) os << "\n  - " << s;
  throw ConfigError(os.str());
}

}  // namespace cavmag
