#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "torsion/grid.hpp"

namespace torsion::test {

inline constexpr double kPi = 3.14159265358979323846;

// Observed convergence order from errors on a grid-doubling sequence:
// least order over successive pairs.
inline double observed_order(const std::vector<double>& errors) {
  if (!errors.empty() && errors.back() < 1e-12) return 10.0;  // hit machine precision
  double order = 1e30;
  for (size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] <= 0.0) return 10.0;
    order = std::min(order, std::log2(errors[i - 1] / errors[i]));
  }
  return order;
}

// Errors measured over a doubling sequence starting at (n_r0, n_theta0).
inline std::vector<double> refinement_errors(int n_r0, int n_theta0, int levels,
                                             const std::function<double(const DiscGrid&)>& err) {
  std::vector<double> out;
  for (int l = 0; l < levels; ++l) out.push_back(err(build_grid(n_r0 << l, n_theta0 << l)));
  return out;
}

}  // namespace torsion::test
