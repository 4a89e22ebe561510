#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "funcineq/measures.hpp"

namespace funcineq {

// Two-sided Poincare certificate: the spectral oracle value, the median-based
// A+/A- quantities, and the interval they imply. The bound convention is
// ambiguous between the constant and its inverse, so both readings are flagged.
struct PoincareCertificate {
  double lambda_spectral = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  std::pair<double, double> bound_interval{0.0, 0.0};
  double median = 0.0;
  bool direct_reading_ok = false;   // lambda_spectral in [B/2, 4B]
  bool inverse_reading_ok = false;  // 1/lambda_spectral in [B, 4B]
};

struct MuckenhouptValues {
  double a_plus = 0.0;
  double a_minus = 0.0;
  double median = 0.0;
};

namespace detail {

inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

inline Grid1D poincare_mesh(const RelativeDensity1D& nu) {
  const Grid1D& t = nu.truncation();
  if (nu.kind() == DensityKind::grid) return t;
  return Grid1D(t.lo, t.hi, 2001);
}

// sup over nodes to one side of the median of tail_mass(x) * int_{median}^{x} dt/p(t),
// accumulated in the log domain so edge values of p never overflow the quotient.
// log_tail(x) is the log of nu([x,inf)) on the plus side, nu((-inf,x]) on the minus side.
template <class LogTail>
double a_side_sup(const RelativeDensity1D& nu, const std::vector<double>& logp, const Grid1D& g,
                  double median, bool plus, LogTail&& log_tail) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double logm = nu.lebesgue_log_pdf(median);
  double h = g.spacing();
  double best = neg_inf;
  double logj = neg_inf;
  if (plus) {
    int i0 = 0;
    while (i0 < g.count && g.node(i0) < median) ++i0;
    if (i0 >= g.count) return 0.0;
    double w0 = g.node(i0) - median;
    if (w0 > 0.0) logj = std::log(0.5 * w0) + log_add(-logm, -logp[i0]);
    for (int j = i0; j < g.count; ++j) {
      best = std::max(best, log_tail(g.node(j)) + logj);
      if (j + 1 < g.count)
        logj = log_add(logj, std::log(0.5 * h) + log_add(-logp[j], -logp[j + 1]));
    }
  } else {
    int i0 = g.count - 1;
    while (i0 >= 0 && g.node(i0) > median) --i0;
    if (i0 < 0) return 0.0;
    double w0 = median - g.node(i0);
    if (w0 > 0.0) logj = std::log(0.5 * w0) + log_add(-logm, -logp[i0]);
    for (int j = i0; j >= 0; --j) {
      best = std::max(best, log_tail(g.node(j)) + logj);
      if (j > 0) logj = log_add(logj, std::log(0.5 * h) + log_add(-logp[j], -logp[j - 1]));
    }
  }
  return std::exp(best);
}

// Bound on what the region beyond the window edge can add to the supremum: with the
// density decaying at local rate kappa past the edge, tail(x) * int_edge^x dt/p is at
// most tail(edge)/(kappa * p(edge)).
inline double a_tail_slack(const RelativeDensity1D& nu, double edge, double logp_edge,
                           double log_tail_edge, bool plus) {
  double slope = nu.dlog_f(edge) - edge;  // d/dx log p
  double kappa = plus ? -slope : slope;
  if (!(kappa > 0.0))
    throw degenerate_error("muckenhoupt: density tail not decaying at the window edge");
  return std::exp(log_tail_edge - logp_edge) / kappa;
}

}  // namespace detail

inline MuckenhouptValues muckenhoupt(const RelativeDensity1D& nu) {
  Grid1D g = detail::poincare_mesh(nu);
  std::vector<double> logp(g.count);
  for (int i = 0; i < g.count; ++i) logp[i] = nu.lebesgue_log_pdf(g.node(i));

  double bulk_lo = nu.quantile(1e-10), bulk_hi = nu.quantile_upper(1e-10);
  for (int i = 0; i < g.count; ++i) {
    double x = g.node(i);
    if (x >= bulk_lo && x <= bulk_hi && !(logp[i] > -690.0))
      throw degenerate_error("muckenhoupt: density underflows in the bulk");
  }

  MuckenhouptValues v;
  v.median = nu.median();
  auto log_sf = [&nu](double x) { return std::log(nu.sf(x)); };
  auto log_cdf = [&nu](double x) { return std::log(nu.cdf(x)); };
  v.a_plus = detail::a_side_sup(nu, logp, g, v.median, true, log_sf);
  v.a_minus = detail::a_side_sup(nu, logp, g, v.median, false, log_cdf);
  v.a_plus += detail::a_tail_slack(nu, g.hi, logp.back(), log_sf(g.hi), true);
  v.a_minus += detail::a_tail_slack(nu, g.lo, logp.front(), log_cdf(g.lo), false);
  if (!(std::isfinite(v.a_plus) && v.a_plus > 0.0 && std::isfinite(v.a_minus) && v.a_minus > 0.0))
    throw numeric_error("muckenhoupt: A+/A- not finite positive");
  return v;
}

namespace detail {

// Eigenvalues of the symmetric tridiagonal below sigma, counted through the
// LDL^T inertia recurrence (Sturm sequence).
inline int tridiag_count_below(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                               double sigma) {
  int count = 0;
  double q = 1.0;
  for (int i = 0; i < diag.size(); ++i) {
    double e2 = (i == 0) ? 0.0 : sub[i - 1] * sub[i - 1];
    q = diag[i] - sigma - e2 / q;
    if (q < 0.0)
      ++count;
    else if (q == 0.0)
      q = 5e-324;
  }
  return count;
}

// k-th smallest eigenvalue (k = 0 is the bottom) by bisection on the count
// function, started from the Gershgorin enclosure. QL sweeps can stall their
// iteration cap on large near-Toeplitz matrices; bisection cannot.
inline double tridiag_kth_eigenvalue(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                                     int k) {
  int n = int(diag.size());
  double lo = diag[0], hi = diag[0];
  for (int i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(sub[i - 1]) : 0.0) + (i + 1 < n ? std::abs(sub[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (tridiag_count_below(diag, sub, mid) >= k + 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Smallest nonzero eigenvalue of -(1/p)(p u')' with no-flux boundaries on g.
// Geometric-mean midpoint coefficients make the symmetrized matrix a function of
// log p differences only, and keep the constant function exactly in the kernel.
inline double fd_gap(const RelativeDensity1D& nu, const Grid1D& g) {
  int n = g.count;
  double h = g.spacing();
  std::vector<double> logp(n);
  for (int i = 0; i < n; ++i) logp[i] = nu.lebesgue_log_pdf(g.node(i));

  Eigen::VectorXd diag(n), sub(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    double wl = (i == 0) ? 0.5 * h : h;
    double wr = (i + 1 == n - 1) ? 0.5 * h : h;
    sub[i] = -1.0 / (h * std::sqrt(wl * wr));
  }
  for (int i = 0; i < n; ++i) {
    double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
    double s = 0.0;
    if (i > 0) s += std::exp(0.5 * (logp[i - 1] - logp[i]));
    if (i + 1 < n) s += std::exp(0.5 * (logp[i + 1] - logp[i]));
    diag[i] = s / (h * w);
  }

  double gap = tridiag_kth_eigenvalue(diag, sub, 1);
  if (!(std::isfinite(gap) && gap > 0.0))
    throw numeric_error("spectral_gap_oracle: nonpositive gap");
  return gap;
}

}  // namespace detail

inline double spectral_gap_oracle(const RelativeDensity1D& nu) {
  Grid1D g = detail::poincare_mesh(nu);
  double fine = detail::fd_gap(nu, g);
  if (g.count >= 257 && g.count % 2 == 1) {
    double coarse = detail::fd_gap(nu, Grid1D(g.lo, g.hi, (g.count + 1) / 2));
    return fine + (fine - coarse) / 3.0;
  }
  return fine;
}

inline PoincareCertificate certify(const RelativeDensity1D& nu) {
  MuckenhouptValues mv = muckenhoupt(nu);
  PoincareCertificate c;
  c.a_plus = mv.a_plus;
  c.a_minus = mv.a_minus;
  c.median = mv.median;
  c.lambda_spectral = spectral_gap_oracle(nu);
  double b = std::max(mv.a_plus, mv.a_minus);
  c.bound_interval = {0.5 * b, 4.0 * b};
  double slop = 1e-9;
  c.direct_reading_ok = c.lambda_spectral >= 0.5 * b * (1.0 - slop) &&
                        c.lambda_spectral <= 4.0 * b * (1.0 + slop);
  double inv = 1.0 / c.lambda_spectral;
  c.inverse_reading_ok = inv >= b * (1.0 - slop) && inv <= 4.0 * b * (1.0 + slop);
  return c;
}

}  // namespace funcineq
