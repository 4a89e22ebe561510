#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "funcineq/common.hpp"

namespace funcineq {

// ============================================================
// Grids
// ============================================================

// Uniform grid on [lo, hi] with count nodes, count >= 2.
struct Grid1D {
  double lo = -10.0;
  double hi = 10.0;
  int count = 4001;

  Grid1D() = default;
  Grid1D(double lo_, double hi_, int count_) : lo(lo_), hi(hi_), count(count_) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "Grid1D: need finite lo < hi");
    require(count >= 2, "Grid1D: need count >= 2");
  }

  double spacing() const { return (hi - lo) / (count - 1); }
  // node(count-1) == hi exactly
  double node(int i) const { return lo + (hi - lo) * (double(i) / (count - 1)); }

  std::vector<double> nodes() const {
    std::vector<double> x(count);
    for (int i = 0; i < count; ++i) x[i] = node(i);
    return x;
  }

  bool operator==(const Grid1D& o) const {
    return lo == o.lo && hi == o.hi && count == o.count;
  }
};

// ============================================================
// Quadrature
// ============================================================

enum class QuadKind { gauss_hermite_gamma, simpson, trapezoid };

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  QuadKind kind = QuadKind::gauss_hermite_gamma;
};

// Gauss-Hermite rule for the standard Gaussian weight (weights sum to 1).
// Nodes/weights from the Jacobi matrix of the monic probabilist Hermite
// recurrence: zero diagonal, off-diagonal sqrt(k).
inline QuadratureRule gauss_hermite_rule(int order) {
  require(order >= 1 && order <= 200, "gauss_hermite_rule: order must be in [1,200]");
  QuadratureRule rule;
  rule.kind = QuadKind::gauss_hermite_gamma;
  if (order == 1) {
    rule.nodes = {0.0};
    rule.weights = {1.0};
    return rule;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(double(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw numeric_error("gauss_hermite_rule: eigensolver failed");
  rule.nodes.resize(order);
  rule.weights.resize(order);
  double wsum = 0.0;
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = es.eigenvalues()[i];
    double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
    wsum += rule.weights[i];
  }
  for (double& w : rule.weights) w /= wsum;
  for (int i = 0; i + 1 < order; ++i)
    if (!(rule.nodes[i] < rule.nodes[i + 1]))
      throw numeric_error("gauss_hermite_rule: nodes not strictly increasing");
  return rule;
}

// Shared cache for the frequently used orders.
inline const QuadratureRule& cached_hermite_rule(int order) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_hermite_rule(order)).first;
  return it->second;
}

// ============================================================
// Gaussian CDF / quantile
// ============================================================

inline double gaussian_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }
inline double gaussian_sf(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

namespace detail {

// Acklam's rational initial guess for the standard normal quantile.
inline double acklam_inverse_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// Inverse of gaussian_cdf on (0,1); |gaussian_cdf(result) - p| <= 1e-10.
inline double gaussian_quantile(double p) {
  require(std::isfinite(p) && p > 0.0 && p < 1.0, "gaussian_quantile: p must lie in (0,1)");
  double x = detail::acklam_inverse_cdf(p);
  const bool upper = p > 0.5;
  const double q = 1.0 - p;
  for (int it = 0; it < 3; ++it) {
    // cdf(x) - p computed through whichever tail keeps full precision
    double err = upper ? (q - gaussian_sf(x)) : (gaussian_cdf(x) - p);
    double dens = gauss_pdf(x);
    if (dens <= 0.0) break;
    double step = err / dens;
    if (!std::isfinite(step)) break;
    x -= step;
  }
  return x;
}

// ============================================================
// Grid integration
// ============================================================

// Composite Simpson coefficients; when the interval count is odd the last
// interval falls back to the trapezoid rule.
inline std::vector<double> simpson_weights(const Grid1D& g) {
  const int n = g.count;
  const double h = g.spacing();
  std::vector<double> w(n, 0.0);
  int last = n - 1;
  bool trap_tail = ((n - 1) % 2) != 0;
  int simpson_end = trap_tail ? last - 1 : last;  // node index ending the Simpson block
  for (int i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (trap_tail) {
    w[last - 1] += h / 2.0;
    w[last] += h / 2.0;
  }
  return w;
}

// Integrate sampled values over the grid (linear in the values).
inline double integrate_grid(const std::vector<double>& values, const Grid1D& g) {
  require(int(values.size()) == g.count, "integrate_grid: values/grid size mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw parameter_error("integrate_grid: non-finite sample");
  std::vector<double> w = simpson_weights(g);
  double s = 0.0;
  for (int i = 0; i < g.count; ++i) s += w[i] * values[i];
  return s;
}

// ============================================================
// Root finding
// ============================================================

// Bisection on a bracketing interval; f continuous, f(a) and f(b) of opposite sign.
inline double find_root(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-14) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  require((fa < 0.0) != (fb < 0.0), "find_root: interval does not bracket a root");
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// log(sum(exp(v))) over possibly very negative terms.
inline double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : v) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double t : v) s += std::exp(t - m);
  return m + std::log(s);
}

}  // namespace funcineq
