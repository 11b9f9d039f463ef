#pragma once

#include <functional>

namespace isothermic {

struct QuadratureResult {
  double value = 0.0;
  long evaluations = 0;
  bool depth_limited = false;  // some interval hit max_depth before converging
};

// Adaptive Simpson on [a, b]. The absolute tolerance is rel_tol times the
// magnitude of the first whole-interval estimate; halves share it equally.
// Throws DomainError if the integrand returns a non-finite value.
QuadratureResult adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                                  double rel_tol = 1e-6, int max_depth = 40);

}  // namespace isothermic
