#pragma once
// Sampled observables along an evolution: population imbalance, per-mode
// photon numbers, their difference, and the relative condensate phase.
#include <cstddef>
#include <vector>

namespace cavmag {

struct TimeSeries {
  std::vector<double> t;       // [1/omega_r]
  std::vector<double> deltaN;  // N1 - N2 [atoms]
  std::vector<double> n1, n2;  // |alpha1|^2, |alpha2|^2 [photons]
  std::vector<double> deltan;  // n1 - n2 [photons]
  std::vector<double> phase;   // arg integral psi1* psi2 [rad]

  std::size_t size() const { return t.size(); }

  void push(double time, double dN, double m1, double m2, double ph) {
    t.push_back(time);
    deltaN.push_back(dN);
    n1.push_back(m1);
    n2.push_back(m2);
    deltan.push_back(m1 - m2);
    phase.push_back(ph);
  }
};

}  // namespace cavmag
