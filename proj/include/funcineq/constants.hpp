#pragma once

#include "funcineq/common.hpp"

namespace funcineq {

// c(lambda) = (1 - lambda + lambda log lambda) / (1 - lambda)^2, the sharp
// log-Sobolev constant at Poincare level lambda; c(1) = 1/2 by continuity
// (series 1/2 - e/6 + e^2/12 with e = lambda - 1 near the removable point).
inline double c_lambda(double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, "c_lambda: need lambda > 0");
  double e = lambda - 1.0;
  if (std::abs(e) < 1e-3) return 0.5 - e / 6.0 + e * e / 12.0;
  return (1.0 - lambda + lambda * std::log(lambda)) / (e * e);
}

// c1(lambda) = (1 - c(lambda)) / 2: deficit-vs-Fisher constant.
inline double c1(double lambda) { return 0.5 * (1.0 - c_lambda(lambda)); }

// c2(lambda) = (1/c(lambda) - 1) / 2: deficit-vs-W2^2 constant.
inline double c2(double lambda) { return 0.5 * (1.0 / c_lambda(lambda) - 1.0); }

}  // namespace funcineq
