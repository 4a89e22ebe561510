#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace funcineq {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double sqrt_2pi = 2.5066282746310005024;
inline constexpr double log_sqrt_2pi = 0.91893853320467274178;

// log density of the standard Gaussian, and the density itself
inline double log_gauss_pdf(double x) { return -0.5 * x * x - log_sqrt_2pi; }
inline double gauss_pdf(double x) { return std::exp(log_gauss_pdf(x)); }

// Error taxonomy. parameter_error maps to CLI exit code 2, everything else to 3.
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// numerical support of a density leaks past its truncation window
struct truncation_error : numeric_error {
  using numeric_error::numeric_error;
};
// density is zero/non-finite where it must be positive
struct degenerate_error : numeric_error {
  using numeric_error::numeric_error;
};
// self-estimated quadrature/scheme error exceeds the requested budget
struct accuracy_error : numeric_error {
  using numeric_error::numeric_error;
};
// transport map construction failed (CDF not invertible to tolerance)
struct map_error : numeric_error {
  using numeric_error::numeric_error;
};

// A computed scalar carrying a self-estimated numerical error and the method used.
struct FunctionalValue {
  double value = 0.0;
  double est_error = 0.0;
  std::string method;
};

inline void require(bool ok, const char* msg) {
  if (!ok) throw parameter_error(msg);
}

}  // namespace funcineq
