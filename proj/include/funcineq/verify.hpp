#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "funcineq/common.hpp"
#include "funcineq/constants.hpp"
#include "funcineq/functionals.hpp"
#include "funcineq/measures.hpp"
#include "funcineq/poincare.hpp"
#include "funcineq/report.hpp"
#include "funcineq/transport.hpp"
#include "funcineq/wehrl.hpp"

namespace funcineq {

using ReportParams = std::vector<std::pair<std::string, double>>;

namespace detail {

constexpr double kCenterTol = 1e-6;

inline bool centered1d(double b) { return std::abs(b) <= kCenterTol; }

inline bool centered_product(const ProductDensity& nu) {
  for (const auto& c : nu.components)
    if (!centered1d(c.barycenter())) return false;
  return true;
}

inline ReportParams tagged(ReportParams tag,
                           std::vector<std::pair<std::string, double>> extra) {
  for (auto& kv : extra) tag.emplace_back(std::move(kv.first), kv.second);
  return tag;
}

// Prepend suite tags, keeping any key the check already recorded.
inline InequalityReport retag(InequalityReport r, const ReportParams& tag) {
  ReportParams merged;
  for (const auto& kv : tag) {
    bool dup = false;
    for (const auto& own : r.params) dup = dup || own.first == kv.first;
    if (!dup) merged.push_back(kv);
  }
  merged.insert(merged.end(), r.params.begin(), r.params.end());
  r.params = std::move(merged);
  return r;
}

inline std::vector<double> linspace(double a, double b, int n) {
  require(n >= 2, "linspace: need n >= 2");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

// Sum of squared coordinatewise W2 distances to the standard Gaussian.
inline FunctionalValue w2_sq_product(const ProductDensity& nu) {
  FunctionalValue out;
  out.method = "w2sq/coordinate-sum";
  for (const auto& c : nu.components) {
    FunctionalValue w = w2_1d(c, RelativeDensity1D::standard_gaussian());
    out.value += w.value * w.value;
    out.est_error += 2.0 * std::abs(w.value) * w.est_error + w.est_error * w.est_error;
  }
  return out;
}

}  // namespace detail

// ============================================================
// Single-theorem checks
// ============================================================

// H <= c(lambda)/2 * I for centered nu with Poincare constant lambda.
inline InequalityReport check_improved_lsi(const RelativeDensity1D& nu, double lambda,
                                           ReportParams tag = {}) {
  require(std::isfinite(lambda) && lambda > 0.0, "check_improved_lsi: need lambda > 0");
  double b = nu.barycenter();
  ReportParams p = detail::tagged(std::move(tag), {{"lambda", lambda}, {"barycenter", b}});
  if (!detail::centered1d(b))
    return make_skip("improved_lsi", std::move(p), "barycenter exceeds the centering tolerance");
  FunctionalValue h = entropy(nu), fi = fisher(nu);
  double rhs = 0.5 * c_lambda(lambda) * fi.value;
  p.emplace_back("c_lambda", c_lambda(lambda));
  return make_report("improved_lsi", h.value, rhs, rhs - h.value, 1e-8, std::move(p),
                     prov_note(h, fi));
}

inline InequalityReport check_improved_lsi(const ProductDensity& nu, double lambda,
                                           ReportParams tag = {}) {
  require(std::isfinite(lambda) && lambda > 0.0, "check_improved_lsi: need lambda > 0");
  ReportParams p = detail::tagged(std::move(tag),
                                  {{"lambda", lambda}, {"n", double(nu.dimension())}});
  if (!detail::centered_product(nu))
    return make_skip("improved_lsi", std::move(p), "barycenter exceeds the centering tolerance");
  FunctionalValue h = entropy(nu), fi = fisher(nu);
  double rhs = 0.5 * c_lambda(lambda) * fi.value;
  p.emplace_back("c_lambda", c_lambda(lambda));
  return make_report("improved_lsi", h.value, rhs, rhs - h.value, 1e-8, std::move(p),
                     prov_note(h, fi));
}

// delta_LSI >= c1(lambda) * I, with the recentered tilt form
// delta_LSI >= c1(lambda) * integral |(log f)' - b|^2 dnu when nu is not centered.
inline InequalityReport check_equi(const RelativeDensity1D& nu, double lambda,
                                   ReportParams tag = {}) {
  require(std::isfinite(lambda) && lambda > 0.0, "check_equi: need lambda > 0");
  double b = nu.barycenter();
  bool recentered = !detail::centered1d(b);
  FunctionalValue d = lsi_deficit(nu);
  FunctionalValue fi = recentered ? fisher_to_tilt(nu, b) : fisher(nu);
  double rhs = c1(lambda) * fi.value;
  ReportParams p = detail::tagged(std::move(tag), {{"lambda", lambda},
                                                   {"c1", c1(lambda)},
                                                   {"barycenter", b},
                                                   {"recentered", recentered ? 1.0 : 0.0}});
  return make_report("equi", d.value, rhs, d.value - rhs, 1e-8, std::move(p), prov_note(d, fi));
}

inline InequalityReport check_equi(const ProductDensity& nu, double lambda,
                                   ReportParams tag = {}) {
  require(std::isfinite(lambda) && lambda > 0.0, "check_equi: need lambda > 0");
  ReportParams p = detail::tagged(std::move(tag), {{"lambda", lambda},
                                                   {"c1", c1(lambda)},
                                                   {"n", double(nu.dimension())}});
  if (!detail::centered_product(nu))
    return make_skip("equi", std::move(p), "barycenter exceeds the centering tolerance");
  FunctionalValue d = lsi_deficit(nu), fi = fisher(nu);
  double rhs = c1(lambda) * fi.value;
  return make_report("equi", d.value, rhs, d.value - rhs, 1e-8, std::move(p), prov_note(d, fi));
}

// delta_LSI >= c2(lambda) * W2(nu, gamma)^2 for centered nu; the margin also
// carries the Talagrand cross-check W2^2 <= 2H.
inline InequalityReport check_w2_bound(const RelativeDensity1D& nu, double lambda,
                                       ReportParams tag = {}) {
  require(std::isfinite(lambda) && lambda > 0.0, "check_w2_bound: need lambda > 0");
  double b = nu.barycenter();
  ReportParams p = detail::tagged(std::move(tag), {{"lambda", lambda}, {"c2", c2(lambda)}});
  if (!detail::centered1d(b))
    return make_skip("w2_bound", std::move(p), "barycenter exceeds the centering tolerance");
  FunctionalValue d = lsi_deficit(nu), h = entropy(nu);
  FunctionalValue w = w2_1d(nu, RelativeDensity1D::standard_gaussian());
  double w2sq = w.value * w.value;
  double rhs = c2(lambda) * w2sq;
  double slack = 2.0 * h.value - w2sq;
  p.emplace_back("w2", w.value);
  p.emplace_back("talagrand_slack", slack);
  return make_report("w2_bound", d.value, rhs, std::min(d.value - rhs, slack), 1e-8,
                     std::move(p), "margin = min(deficit slack, talagrand slack); " + prov_note(d, w));
}

inline InequalityReport check_w2_bound(const ProductDensity& nu, double lambda,
                                       ReportParams tag = {}) {
  require(std::isfinite(lambda) && lambda > 0.0, "check_w2_bound: need lambda > 0");
  ReportParams p = detail::tagged(std::move(tag), {{"lambda", lambda},
                                                   {"c2", c2(lambda)},
                                                   {"n", double(nu.dimension())}});
  if (!detail::centered_product(nu))
    return make_skip("w2_bound", std::move(p), "barycenter exceeds the centering tolerance");
  FunctionalValue d = lsi_deficit(nu), h = entropy(nu);
  FunctionalValue w2sq = detail::w2_sq_product(nu);
  double rhs = c2(lambda) * w2sq.value;
  double slack = 2.0 * h.value - w2sq.value;
  p.emplace_back("w2_sq", w2sq.value);
  p.emplace_back("talagrand_slack", slack);
  return make_report("w2_bound", d.value, rhs, std::min(d.value - rhs, slack), 1e-8,
                     std::move(p),
                     "margin = min(deficit slack, talagrand slack); " + prov_note(d, w2sq));
}

// delta_LSI >= c1(lambda)/4 * TV(nu, gamma)^2 for centered nu.
inline InequalityReport check_tv_bound(const RelativeDensity1D& nu, double lambda,
                                       ReportParams tag = {}) {
  require(std::isfinite(lambda) && lambda > 0.0, "check_tv_bound: need lambda > 0");
  double b = nu.barycenter();
  ReportParams p = detail::tagged(std::move(tag), {{"lambda", lambda}, {"c1", c1(lambda)}});
  if (!detail::centered1d(b))
    return make_skip("tv_bound", std::move(p), "barycenter exceeds the centering tolerance");
  FunctionalValue d = lsi_deficit(nu);
  FunctionalValue tv = total_variation(nu);
  double rhs = 0.25 * c1(lambda) * tv.value * tv.value;
  p.emplace_back("tv", tv.value);
  return make_report("tv_bound", d.value, rhs, d.value - rhs, 1e-8, std::move(p),
                     prov_note(d, tv));
}

// H <= W2 sqrt(I) - W2^2 / 2; the equivalent deficit chain
// delta_LSI >= (sqrt(I) - W2)^2 / 2 is recorded in the params.
inline InequalityReport check_hwi(const RelativeDensity1D& nu, ReportParams tag = {}) {
  FunctionalValue h = entropy(nu), fi = fisher(nu);
  FunctionalValue w = w2_1d(nu, RelativeDensity1D::standard_gaussian());
  double rhs = w.value * std::sqrt(std::max(fi.value, 0.0)) - 0.5 * w.value * w.value;
  double chain = 0.5 * (std::sqrt(std::max(fi.value, 0.0)) - w.value) *
                 (std::sqrt(std::max(fi.value, 0.0)) - w.value);
  ReportParams p = detail::tagged(std::move(tag), {{"w2", w.value},
                                                   {"fisher", fi.value},
                                                   {"chain_lhs", 0.5 * fi.value - h.value},
                                                   {"chain_rhs", chain}});
  return make_report("hwi", h.value, rhs, rhs - h.value, 1e-6, std::move(p), prov_note(h, w));
}

inline InequalityReport check_hwi(const ProductDensity& nu, ReportParams tag = {}) {
  FunctionalValue h = entropy(nu), fi = fisher(nu);
  FunctionalValue w2sq = detail::w2_sq_product(nu);
  double w = std::sqrt(std::max(w2sq.value, 0.0));
  double rhs = w * std::sqrt(std::max(fi.value, 0.0)) - 0.5 * w2sq.value;
  double chain =
      0.5 * (std::sqrt(std::max(fi.value, 0.0)) - w) * (std::sqrt(std::max(fi.value, 0.0)) - w);
  ReportParams p = detail::tagged(std::move(tag), {{"n", double(nu.dimension())},
                                                   {"w2", w},
                                                   {"fisher", fi.value},
                                                   {"chain_lhs", 0.5 * fi.value - h.value},
                                                   {"chain_rhs", chain}});
  return make_report("hwi", h.value, rhs, rhs - h.value, 1e-6, std::move(p), prov_note(h, w2sq));
}

// delta_Tal >= c * min(W11^2 / n, W11 / sqrt(n)) for centered nu; the empirical
// ratio delta_Tal / min(...) is recorded when the bound is nondegenerate.
inline InequalityReport check_tal_theorem(const RelativeDensity1D& nu, double c = 1.0 / 288.0,
                                          ReportParams tag = {}) {
  require(std::isfinite(c) && c > 0.0, "check_tal_theorem: need c > 0");
  double b = nu.barycenter();
  ReportParams p = detail::tagged(std::move(tag), {{"c", c}, {"n", 1.0}});
  if (!detail::centered1d(b))
    return make_skip("tal_theorem", std::move(p), "barycenter exceeds the centering tolerance");
  FunctionalValue dt = tal_deficit(nu);
  FunctionalValue w11 = w1_1d(nu, RelativeDensity1D::standard_gaussian());
  double floor = std::min(w11.value * w11.value, w11.value);
  double rhs = c * floor;
  p.emplace_back("w11", w11.value);
  if (floor > 1e-300) p.emplace_back("empirical_ratio", dt.value / floor);
  return make_report("tal_theorem", dt.value, rhs, dt.value - rhs, 1e-8, std::move(p),
                     prov_note(dt, w11));
}

inline InequalityReport check_tal_theorem(const ProductDensity& nu, double c = 1.0 / 288.0,
                                          ReportParams tag = {}) {
  require(std::isfinite(c) && c > 0.0, "check_tal_theorem: need c > 0");
  int n = nu.dimension();
  ReportParams p = detail::tagged(std::move(tag), {{"c", c}, {"n", double(n)}});
  if (!detail::centered_product(nu))
    return make_skip("tal_theorem", std::move(p), "barycenter exceeds the centering tolerance");
  FunctionalValue dt = tal_deficit(nu);
  FunctionalValue w11 = w11_product(nu, standard_gaussian_product(n));
  double floor = std::min(w11.value * w11.value / n, w11.value / std::sqrt(double(n)));
  double rhs = c * floor;
  p.emplace_back("w11", w11.value);
  if (floor > 1e-300) p.emplace_back("empirical_ratio", dt.value / floor);
  return make_report("tal_theorem", dt.value, rhs, dt.value - rhs, 1e-8, std::move(p),
                     prov_note(dt, w11));
}

// Chain constant for the W11 deficit bound: delta_LSI >= delta_Tal^2 / (16 H)
// composed with the transport theorem's c (min and square commute on
// nonnegative branches, so one constant serves both).
inline double deficit1_chain_constant(double c_tal = 1.0 / 288.0) {
  require(std::isfinite(c_tal) && c_tal > 0.0, "deficit1_chain_constant: need c > 0");
  return c_tal * c_tal / 16.0;
}

// delta_LSI >= (c / H) * min(W11(nu_b, gamma)^4 / n^2, W11(nu_b, gamma)^2 / n),
// with nu_b the recentered density.  Requires positive entropy.
inline InequalityReport check_deficit1(const RelativeDensity1D& nu,
                                       double c = deficit1_chain_constant(),
                                       ReportParams tag = {}) {
  require(std::isfinite(c) && c > 0.0, "check_deficit1: need c > 0");
  FunctionalValue h = entropy(nu);
  ReportParams p = detail::tagged(std::move(tag), {{"c_chain", c}, {"n", 1.0}});
  if (!(h.value > 1e-12)) return make_skip("deficit1", std::move(p), "entropy is zero");
  FunctionalValue d = lsi_deficit(nu);
  FunctionalValue w11 = w1_1d(nu.recenter(), RelativeDensity1D::standard_gaussian());
  double w2sq = w11.value * w11.value;
  double rhs = (c / h.value) * std::min(w2sq * w2sq, w2sq);
  p.emplace_back("entropy", h.value);
  p.emplace_back("w11_recentered", w11.value);
  return make_report("deficit1", d.value, rhs, d.value - rhs, 1e-8, std::move(p),
                     prov_note(d, w11));
}

inline InequalityReport check_deficit1(const ProductDensity& nu,
                                       double c = deficit1_chain_constant(),
                                       ReportParams tag = {}) {
  require(std::isfinite(c) && c > 0.0, "check_deficit1: need c > 0");
  int n = nu.dimension();
  FunctionalValue h = entropy(nu);
  ReportParams p = detail::tagged(std::move(tag), {{"c_chain", c}, {"n", double(n)}});
  if (!(h.value > 1e-12)) return make_skip("deficit1", std::move(p), "entropy is zero");
  std::vector<RelativeDensity1D> comps;
  comps.reserve(nu.components.size());
  for (const auto& comp : nu.components) comps.push_back(comp.recenter());
  FunctionalValue d = lsi_deficit(nu);
  FunctionalValue w11 = w11_product(ProductDensity(std::move(comps)), standard_gaussian_product(n));
  double wsq = w11.value * w11.value;
  double rhs = (c / h.value) * std::min(wsq * wsq / (double(n) * n), wsq / n);
  p.emplace_back("entropy", h.value);
  p.emplace_back("w11_recentered", w11.value);
  return make_report("deficit1", d.value, rhs, d.value - rhs, 1e-8, std::move(p),
                     prov_note(d, w11));
}

// delta_LSI >= min( c'^2/2 * W11^4 / (n^2 W2^2),
//                   1/2 (sqrt(W2^2 + c W11 / sqrt(n)) - W2)^2 )  for centered nu.
// c' defaults to c/4: sqrt(1+u) >= 1 + u/4 on 0 <= u <= 1 and
// u = c W11^2 / (n W2^2) <= c <= 1 because W11^2 <= n W2^2.
inline InequalityReport check_deficit2(const RelativeDensity1D& nu, double c = 1.0 / 288.0,
                                       double c_prime = -1.0, ReportParams tag = {}) {
  require(std::isfinite(c) && c > 0.0, "check_deficit2: need c > 0");
  if (c_prime < 0.0) c_prime = 0.25 * c;
  double b = nu.barycenter();
  ReportParams p = detail::tagged(std::move(tag), {{"c", c}, {"c_prime", c_prime}, {"n", 1.0}});
  if (!detail::centered1d(b))
    return make_skip("deficit2", std::move(p), "barycenter exceeds the centering tolerance");
  FunctionalValue d = lsi_deficit(nu);
  FunctionalValue w = w2_1d(nu, RelativeDensity1D::standard_gaussian());
  FunctionalValue w11 = w1_1d(nu, RelativeDensity1D::standard_gaussian());
  double w2sq = w.value * w.value;
  double branch1 = 0.0, branch2 = 0.0;
  if (w2sq > 1e-18) {
    double u = c_prime * w11.value * w11.value / w2sq;
    branch1 = 0.5 * w2sq * u * u;
    double root = std::sqrt(w2sq + c * w11.value) - w.value;
    branch2 = 0.5 * root * root;
  }
  double rhs = std::min(branch1, branch2);
  p.emplace_back("w2", w.value);
  p.emplace_back("w11", w11.value);
  p.emplace_back("branch1", branch1);
  p.emplace_back("branch2", branch2);
  return make_report("deficit2", d.value, rhs, d.value - rhs, 1e-8, std::move(p),
                     prov_note(d, w11));
}

inline InequalityReport check_deficit2(const ProductDensity& nu, double c = 1.0 / 288.0,
                                       double c_prime = -1.0, ReportParams tag = {}) {
  require(std::isfinite(c) && c > 0.0, "check_deficit2: need c > 0");
  if (c_prime < 0.0) c_prime = 0.25 * c;
  int n = nu.dimension();
  ReportParams p = detail::tagged(std::move(tag),
                                  {{"c", c}, {"c_prime", c_prime}, {"n", double(n)}});
  if (!detail::centered_product(nu))
    return make_skip("deficit2", std::move(p), "barycenter exceeds the centering tolerance");
  FunctionalValue d = lsi_deficit(nu);
  FunctionalValue w2sq = detail::w2_sq_product(nu);
  FunctionalValue w11 = w11_product(nu, standard_gaussian_product(n));
  double branch1 = 0.0, branch2 = 0.0;
  if (w2sq.value > 1e-18) {
    double u = c_prime * w11.value * w11.value / (double(n) * w2sq.value);
    branch1 = 0.5 * w2sq.value * u * u;
    double root =
        std::sqrt(w2sq.value + c * w11.value / std::sqrt(double(n))) - std::sqrt(w2sq.value);
    branch2 = 0.5 * root * root;
  }
  double rhs = std::min(branch1, branch2);
  p.emplace_back("w2", std::sqrt(std::max(w2sq.value, 0.0)));
  p.emplace_back("w11", w11.value);
  p.emplace_back("branch1", branch1);
  p.emplace_back("branch2", branch2);
  return make_report("deficit2", d.value, rhs, d.value - rhs, 1e-8, std::move(p),
                     prov_note(d, w11));
}

// delta_LSI >= (1/10) tilde_phi( integral |T' - 1| dnu ).
inline InequalityReport check_psi_chain(const RelativeDensity1D& nu, ReportParams tag = {}) {
  FunctionalValue d = lsi_deficit(nu);
  FunctionalValue u = cordero_t_prime_l1(nu);
  double rhs = 0.1 * tilde_phi(u.value);
  ReportParams p = detail::tagged(std::move(tag), {{"tprime_l1", u.value}});
  return make_report("psi_chain", d.value, rhs, d.value - rhs, 1e-6, std::move(p),
                     prov_note(d, u));
}

// Explicit constant for the (1,1)-Poincare deficit bound.  With u* =
// tilde_phi_inv(10), the deficit gate delta <= 1 forces
// integral |T'-1| dnu <= u* sqrt(delta), and the transport identity
// integral (x - T) dnu = b turns the quadratic gap into
// integral |(log f)' - b| dnu <= sqrt(delta) (sqrt(2) + u* / lambda11).
inline double poincare11_c_tilde(double lambda11) {
  require(std::isfinite(lambda11) && lambda11 > 0.0, "poincare11_c_tilde: need lambda11 > 0");
  double ustar = tilde_phi_inv(10.0);
  double denom = std::sqrt(2.0) + ustar / lambda11;
  return 1.0 / (denom * denom);
}

// delta_LSI >= c_tilde(lambda11) * (integral |(log f)' - b| dnu)^2 when
// delta_LSI <= 1 and nu satisfies a (1,1)-Poincare inequality with lambda11.
inline InequalityReport check_poincare11_thm(const RelativeDensity1D& nu, double lambda11,
                                             ReportParams tag = {}) {
  ReportParams p = detail::tagged(std::move(tag), {{"lambda11", lambda11}});
  if (!(std::isfinite(lambda11) && lambda11 > 0.0))
    return make_skip("poincare11", std::move(p), "lambda11 not supplied");
  FunctionalValue d = lsi_deficit(nu);
  if (!(d.value <= 1.0)) {
    p.emplace_back("deficit", d.value);
    return make_skip("poincare11", std::move(p), "deficit exceeds 1");
  }
  double b = nu.barycenter();
  FunctionalValue m = tilt_l1(nu, b);
  double ustar = tilde_phi_inv(10.0);
  double ct = poincare11_c_tilde(lambda11);
  double rhs = ct * m.value * m.value;
  p.emplace_back("c_tilde", ct);
  p.emplace_back("u_star", ustar);
  p.emplace_back("l1_tilt", m.value);
  p.emplace_back("barycenter", b);
  return make_report("poincare11", d.value, rhs, d.value - rhs, 1e-8, std::move(p),
                     "c_tilde = (sqrt(2) + u*/lambda11)^-2, u* = tilde_phi_inv(10); " +
                         prov_note(d, m));
}

// Under Var(nu) <= 1: delta_LSI >= tilde_phi( C * integral |(log f)'-b|^2 dnu )
// with C = 1/4 (from 2 delta + 2 tilde_phi_inv(delta) <= 4 tilde_phi_inv(delta))
// and delta_LSI >= W2(nu, gamma_b)^4 / 96 (tilde_phi(t) = t^2/6 on [0,1] at
// t = W2^2/4 <= 1).  The report takes the stronger branch as rhs.
inline InequalityReport check_var1_thm(const RelativeDensity1D& nu, ReportParams tag = {}) {
  double var = nu.variance();
  ReportParams p = detail::tagged(std::move(tag), {{"variance", var}});
  if (!(var <= 1.0 + 1e-9)) return make_skip("var1", std::move(p), "variance exceeds 1");
  const double C = 0.25, cw = 1.0 / 96.0;
  double b = nu.barycenter();
  FunctionalValue d = lsi_deficit(nu);
  FunctionalValue it = fisher_to_tilt(nu, b);
  FunctionalValue w = w2_1d(nu, RelativeDensity1D::exponential_tilt(b));
  double phi_branch = tilde_phi(C * it.value);
  double w2_branch = cw * w.value * w.value * w.value * w.value;
  double rhs = std::max(phi_branch, w2_branch);
  p.emplace_back("C", C);
  p.emplace_back("c_w2", cw);
  p.emplace_back("tilt_fisher", it.value);
  p.emplace_back("w2_tilt", w.value);
  p.emplace_back("phi_branch", phi_branch);
  p.emplace_back("w2_branch", w2_branch);
  return make_report("var1", d.value, rhs, d.value - rhs, 1e-8, std::move(p), prov_note(d, w));
}

// ============================================================
// Suites
// ============================================================

// Symmetric quartic tilt f proportional to exp(-a x^4) against gamma.
inline RelativeDensity1D quartic_tilt_density(double a) {
  require(std::isfinite(a) && a > 0.0, "quartic_tilt_density: need a > 0");
  Grid1D g(-8.0, 8.0, 3201);
  std::vector<double> raw(g.count);
  for (int i = 0; i < g.count; ++i) {
    double x = g.node(i);
    raw[i] = -a * x * x * x * x;
  }
  return RelativeDensity1D::normalize(std::move(raw), g);
}

struct FamilySpec {
  std::string name = "custom";  // gaussian_scale | tilt | quartic | product | wehrl | all | custom
  std::vector<RelativeDensity1D> densities;  // custom payload
  double c_tal = 1.0 / 288.0;
};

inline std::vector<std::string> suite_names() {
  return {"gaussian_scale", "tilt", "quartic", "product", "wehrl", "all"};
}

inline std::string report_sort_key(const InequalityReport& r) {
  std::string k = r.name;
  for (const auto& kv : r.params) {
    k += '|';
    k += kv.first;
    k += '=';
    k += format_double(kv.second);
  }
  return k;
}

inline void sort_reports(std::vector<InequalityReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const InequalityReport& a, const InequalityReport& b) {
                     return report_sort_key(a) < report_sort_key(b);
                   });
}

namespace detail {

inline void battery_1d(std::vector<InequalityReport>& out, const RelativeDensity1D& nu,
                       double lambda, double lambda11, const ReportParams& tag, double c_tal) {
  out.push_back(check_improved_lsi(nu, lambda, tag));
  out.push_back(check_equi(nu, lambda, tag));
  out.push_back(check_w2_bound(nu, lambda, tag));
  out.push_back(check_tv_bound(nu, lambda, tag));
  out.push_back(check_hwi(nu, tag));
  out.push_back(check_tal_theorem(nu, c_tal, tag));
  out.push_back(check_deficit1(nu, deficit1_chain_constant(c_tal), tag));
  out.push_back(check_deficit2(nu, c_tal, -1.0, tag));
  out.push_back(check_psi_chain(nu, tag));
  out.push_back(check_poincare11_thm(nu, lambda11, tag));
  out.push_back(check_var1_thm(nu, tag));
}

inline void battery_product(std::vector<InequalityReport>& out, const ProductDensity& nu,
                            double lambda, const ReportParams& tag, double c_tal) {
  out.push_back(check_improved_lsi(nu, lambda, tag));
  out.push_back(check_equi(nu, lambda, tag));
  out.push_back(check_w2_bound(nu, lambda, tag));
  out.push_back(check_hwi(nu, tag));
  out.push_back(check_tal_theorem(nu, c_tal, tag));
  out.push_back(check_deficit1(nu, deficit1_chain_constant(c_tal), tag));
  out.push_back(check_deficit2(nu, c_tal, -1.0, tag));
}

inline void gaussian_scale_family(std::vector<InequalityReport>& out, double c_tal) {
  for (double s : linspace(0.5, 4.0, 15)) {
    RelativeDensity1D nu = RelativeDensity1D::gaussian_relative(0.0, s);
    battery_1d(out, nu, 1.0 / s, 0.5 / std::sqrt(s), {{"s", s}}, c_tal);
  }
}

inline void tilt_family(std::vector<InequalityReport>& out, double c_tal) {
  for (double b : linspace(0.0, 2.0, 9)) {
    RelativeDensity1D nu = RelativeDensity1D::exponential_tilt(b);
    battery_1d(out, nu, 1.0, 0.5, {{"b", b}}, c_tal);
  }
}

inline void quartic_family(std::vector<InequalityReport>& out, double c_tal) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double a : {0.02, 0.05, 0.1, 0.2}) {
    RelativeDensity1D nu = quartic_tilt_density(a);
    PoincareCertificate cert = certify(nu);
    ReportParams tag{{"a", a}, {"lambda_spectral", cert.lambda_spectral}};
    battery_1d(out, nu, cert.lambda_spectral, nan, tag, c_tal);
  }
}

inline void product_family(std::vector<InequalityReport>& out, double c_tal) {
  for (double s : {0.8, 2.0}) {
    RelativeDensity1D comp = RelativeDensity1D::gaussian_relative(0.0, s);
    ProductDensity nu({comp, comp});
    ReportParams tag{{"s", s}};
    battery_product(out, nu, 1.0 / s, tag, c_tal);
    FunctionalValue pair_deficit = tal_deficit(nu);
    FunctionalValue single = tal_deficit(comp);
    double rhs = 2.0 * single.value;
    out.push_back(make_report(
        "tal_tensorization", pair_deficit.value, rhs, -std::abs(pair_deficit.value - rhs), 1e-5,
        detail::tagged(tag, {{"n", 2.0}}),
        "coordinatewise transport makes the product deficit structurally additive; " +
            prov_note(pair_deficit, single)));
  }
}

inline void wehrl_family(std::vector<InequalityReport>& out) {
  for (double h : {pi, 2.0 * pi}) {
    for (int state = 0; state < 3; ++state) {
      WaveFunction1D psi;
      double shift = 0.0;
      if (state == 0) {
        psi = coherent_state(h);
      } else if (state == 1) {
        psi = coherent_state(h, 0.5, 1.0);
        shift = 1.5;
      } else {
        psi = fock_state(1, h);
      }
      PhaseSpaceDensity rho = coherent_transform(psi, phase_grid(h, shift), phase_grid(h, shift));
      ReportParams tag{{"h", h}, {"state", double(state)}};
      double mass = rho.mu_mass();
      out.push_back(make_report("wehrl_isometry", mass, 1.0, -std::abs(mass - 1.0), 1e-6, tag,
                                "phase-space measure mass against the unit wave norm"));
      FunctionalValue s = wehrl_entropy(rho);
      out.push_back(
          make_report("wehrl_bound", s.value, 1.0, s.value - 1.0, 2e-3, tag, prov_note(s)));
      out.push_back(retag(carlen_identity_check(rho, h), tag));
      out.push_back(retag(wehrl_lsi_bridge(rho, h), tag));
    }
  }
}

inline void custom_family(std::vector<InequalityReport>& out,
                          const std::vector<RelativeDensity1D>& densities, double c_tal) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < densities.size(); ++i) {
    PoincareCertificate cert = certify(densities[i]);
    ReportParams tag{{"idx", double(i)}, {"lambda_spectral", cert.lambda_spectral}};
    battery_1d(out, densities[i], cert.lambda_spectral, nan, tag, c_tal);
  }
}

}  // namespace detail

// Run every applicable check over a built-in family (or a user density list).
// Individual failures are recorded in the reports, never thrown; rows come back
// sorted by name+params.
inline std::vector<InequalityReport> run_suite(const FamilySpec& family) {
  std::vector<InequalityReport> out;
  const std::string& name = family.name;
  if (name == "gaussian_scale" || name == "all") detail::gaussian_scale_family(out, family.c_tal);
  if (name == "tilt" || name == "all") detail::tilt_family(out, family.c_tal);
  if (name == "quartic" || name == "all") detail::quartic_family(out, family.c_tal);
  if (name == "product" || name == "all") detail::product_family(out, family.c_tal);
  if (name == "wehrl" || name == "all") detail::wehrl_family(out);
  if (name == "custom") detail::custom_family(out, family.densities, family.c_tal);
  else if (name != "gaussian_scale" && name != "tilt" && name != "quartic" && name != "product" &&
           name != "wehrl" && name != "all")
    throw parameter_error("run_suite: unknown family '" + name + "'");
  sort_reports(out);
  return out;
}

}  // namespace funcineq
