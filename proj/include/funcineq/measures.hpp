#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "funcineq/common.hpp"
#include "funcineq/numerics.hpp"

namespace funcineq {

enum class DensityKind { analytic_gaussian, exponential_tilt, grid };

// A probability density given relative to the standard Gaussian: dnu = f dgamma.
// Three representations share one interface:
//   analytic_gaussian(m,s): f(x) = (1/sqrt(s)) exp(x^2/2 - (x-m)^2/(2s)), nu = N(m,s)
//   exponential_tilt(b):    f(x) = exp(bx - b^2/2),                        nu = N(b,1)
//   grid:                   log f sampled on a uniform truncation grid
// Every constructed density satisfies |integral of f dgamma - 1| <= 1e-8.
class RelativeDensity1D {
 public:
  static RelativeDensity1D gaussian_relative(double m, double s) {
    require(std::isfinite(m) && std::isfinite(s) && s > 0.0,
            "gaussian_relative: need finite m and s > 0");
    RelativeDensity1D d;
    d.kind_ = DensityKind::analytic_gaussian;
    d.mean_ = m;
    d.var_ = s;
    double half = 10.0 * std::sqrt(s);
    d.trunc_ = Grid1D(m - half, m + half, 4001);
    return d;
  }

  static RelativeDensity1D exponential_tilt(double b) {
    require(std::isfinite(b), "exponential_tilt: need finite b");
    RelativeDensity1D d;
    d.kind_ = DensityKind::exponential_tilt;
    d.tilt_ = b;
    d.trunc_ = Grid1D(b - 10.0, b + 10.0, 4001);
    return d;
  }

  static RelativeDensity1D standard_gaussian() { return exponential_tilt(0.0); }

  // Sampled log f, already normalized; rejects mass deviations beyond 1e-8.
  static RelativeDensity1D from_log_grid(std::vector<double> logf, const Grid1D& g,
                                         double mass_tol = 1e-8) {
    return build_grid(std::move(logf), {}, g, mass_tol);
  }

  static RelativeDensity1D from_log_grid(std::vector<double> logf, std::vector<double> dlogf,
                                         const Grid1D& g, double mass_tol = 1e-8) {
    return build_grid(std::move(logf), std::move(dlogf), g, mass_tol);
  }

  // Normalize raw log-density samples: subtracts log of the gamma-weighted mass.
  static RelativeDensity1D normalize(std::vector<double> raw_logf, const Grid1D& g) {
    subtract_log_mass(raw_logf, g);
    return build_grid(std::move(raw_logf), {}, g, 1e-10);
  }

  // Same, sampling callables for log f and its derivative.
  template <class F, class DF>
  static RelativeDensity1D normalize_fn(F&& raw_logf, DF&& raw_dlogf, const Grid1D& g) {
    std::vector<double> lf(g.count), dlf(g.count);
    for (int i = 0; i < g.count; ++i) {
      double x = g.node(i);
      lf[i] = raw_logf(x);
      dlf[i] = raw_dlogf(x);
    }
    subtract_log_mass(lf, g);
    return build_grid(std::move(lf), std::move(dlf), g, 1e-10);
  }

  DensityKind kind() const { return kind_; }
  const Grid1D& truncation() const { return trunc_; }
  bool truncation_warning() const { return trunc_warning_; }
  double param_mean() const { return mean_; }
  double param_var() const { return var_; }
  double param_tilt() const { return tilt_; }

  // ---- pointwise evaluation ------------------------------------------------

  double log_f(double x) const {
    switch (kind_) {
      case DensityKind::analytic_gaussian:
        return -0.5 * std::log(var_) + 0.5 * x * x - 0.5 * (x - mean_) * (x - mean_) / var_;
      case DensityKind::exponential_tilt:
        return tilt_ * x - 0.5 * tilt_ * tilt_;
      case DensityKind::grid:
        return interp(logf_, x, true);
    }
    return 0.0;
  }

  double dlog_f(double x) const {
    switch (kind_) {
      case DensityKind::analytic_gaussian:
        return x * (1.0 - 1.0 / var_) + mean_ / var_;
      case DensityKind::exponential_tilt:
        return tilt_;
      case DensityKind::grid:
        return interp(dlogf_, x, false);
    }
    return 0.0;
  }

  double f(double x) const { return std::exp(log_f(x)); }
  double lebesgue_log_pdf(double x) const { return log_f(x) + log_gauss_pdf(x); }
  double lebesgue_pdf(double x) const { return std::exp(lebesgue_log_pdf(x)); }

  // ---- distribution functions ---------------------------------------------

  double cdf(double x) const {
    switch (kind_) {
      case DensityKind::analytic_gaussian:
        return gaussian_cdf((x - mean_) / std::sqrt(var_));
      case DensityKind::exponential_tilt:
        return gaussian_cdf(x - tilt_);
      case DensityKind::grid:
        return grid_cdf(x);
    }
    return 0.0;
  }

  double sf(double x) const {
    switch (kind_) {
      case DensityKind::analytic_gaussian:
        return gaussian_sf((x - mean_) / std::sqrt(var_));
      case DensityKind::exponential_tilt:
        return gaussian_sf(x - tilt_);
      case DensityKind::grid:
        return grid_sf(x);
    }
    return 0.0;
  }

  double quantile(double p) const {
    require(std::isfinite(p) && p > 0.0 && p < 1.0, "quantile: p must lie in (0,1)");
    switch (kind_) {
      case DensityKind::analytic_gaussian:
        return mean_ + std::sqrt(var_) * gaussian_quantile(p);
      case DensityKind::exponential_tilt:
        return tilt_ + gaussian_quantile(p);
      case DensityKind::grid:
        return grid_quantile(p);
    }
    return 0.0;
  }

  // x such that sf(x) = q, sharp deep into the upper tail.
  double quantile_upper(double q) const {
    require(std::isfinite(q) && q > 0.0 && q < 1.0, "quantile_upper: q must lie in (0,1)");
    switch (kind_) {
      case DensityKind::analytic_gaussian:
        return mean_ - std::sqrt(var_) * gaussian_quantile(q);
      case DensityKind::exponential_tilt:
        return tilt_ - gaussian_quantile(q);
      case DensityKind::grid:
        return grid_quantile_upper(q);
    }
    return 0.0;
  }

  double median() const { return quantile(0.5); }

  // ---- integration against nu ---------------------------------------------

  // E_nu[g]. Analytic kinds substitute x = m + sqrt(s) z and use Gauss-Hermite;
  // the grid kind uses the Simpson rule of its truncation grid.
  template <class G>
  double expect(G&& g, int gh_order = 120) const {
    if (kind_ == DensityKind::grid) {
      double s = 0.0;
      for (int i = 0; i < trunc_.count; ++i) s += pdfw_[i] * g(trunc_.node(i));
      return s;
    }
    const QuadratureRule& rule = cached_hermite_rule(gh_order);
    double m = (kind_ == DensityKind::analytic_gaussian) ? mean_ : tilt_;
    double sd = (kind_ == DensityKind::analytic_gaussian) ? std::sqrt(var_) : 1.0;
    double s = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * g(m + sd * rule.nodes[i]);
    return s;
  }

  // E_nu[g] with a self-estimated error from a second resolution.
  template <class G>
  FunctionalValue expect_fv(G&& g) const {
    FunctionalValue out;
    if (kind_ == DensityKind::grid) {
      double full = expect(g);
      double half = 0.0;
      for (size_t k = 0; k < half_idx_.size(); ++k)
        half += half_pdfw_[k] * g(trunc_.node(half_idx_[k]));
      out.value = full;
      out.est_error = std::abs(full - half) / 15.0 + 1e-15 * (1.0 + std::abs(full));
      out.method = "grid-simpson-4001v2001";
    } else {
      double coarse = expect(g, 80);
      double fine = expect(g, 120);
      out.value = fine;
      out.est_error = std::abs(fine - coarse) + 1e-16 * (1.0 + std::abs(fine));
      out.method = "gauss-hermite-120v80";
    }
    return out;
  }

  // Measured gamma-weighted mass (grid kind); analytic kinds are normalized exactly.
  double mass() const {
    if (kind_ != DensityKind::grid) return 1.0;
    double s = 0.0;
    for (double w : pdfw_) s += w;
    return s;
  }

  double barycenter() const {
    switch (kind_) {
      case DensityKind::analytic_gaussian:
        return mean_;
      case DensityKind::exponential_tilt:
        return tilt_;
      case DensityKind::grid:
        return expect([](double x) { return x; });
    }
    return 0.0;
  }

  double variance() const {
    switch (kind_) {
      case DensityKind::analytic_gaussian:
        return var_;
      case DensityKind::exponential_tilt:
        return 1.0;
      case DensityKind::grid: {
        double b = barycenter();
        return expect([b](double x) { return (x - b) * (x - b); });
      }
    }
    return 0.0;
  }

  // Centered version: x -> x + b pushed back through the tilt identity
  // f_b(x) = f(x+b) exp(-bx - b^2/2). Analytic kinds recenter in closed form.
  RelativeDensity1D recenter() const {
    switch (kind_) {
      case DensityKind::analytic_gaussian:
        return gaussian_relative(0.0, var_);
      case DensityKind::exponential_tilt:
        return exponential_tilt(0.0);
      case DensityKind::grid:
        break;
    }
    double b = barycenter();
    if (std::abs(b) > 0.25 * (trunc_.hi - trunc_.lo))
      throw truncation_error("recenter: shift exceeds a quarter of the truncation window");
    std::vector<double> lf(trunc_.count), dlf(trunc_.count);
    for (int i = 0; i < trunc_.count; ++i) {
      double x = trunc_.node(i);
      lf[i] = log_f(x + b) - b * x - 0.5 * b * b;
      dlf[i] = dlog_f(x + b) - b;
    }
    double drift = std::abs(measure_log_mass(lf, trunc_));
    if (drift > 1e-6)
      throw truncation_error("recenter: mass drifted past 1e-6, enlarge the grid");
    subtract_log_mass(lf, trunc_);
    RelativeDensity1D out = build_grid(std::move(lf), std::move(dlf), trunc_, 1e-10);
    return out;
  }

  // grid-kind internals shared with the flow modules
  const std::vector<double>& grid_log_f() const { return logf_; }
  const std::vector<double>& grid_dlog_f() const { return dlogf_; }

 private:
  DensityKind kind_ = DensityKind::exponential_tilt;
  double mean_ = 0.0, var_ = 1.0;  // analytic_gaussian
  double tilt_ = 0.0;              // exponential_tilt
  Grid1D trunc_;
  bool trunc_warning_ = false;

  // grid kind storage
  std::vector<double> logf_, dlogf_;
  std::vector<double> pdfw_;              // simpson weight * lebesgue pdf at nodes
  std::vector<int> half_idx_;             // subsampled nodes for the error estimate
  std::vector<double> half_pdfw_;
  std::vector<double> cum_, surv_;        // normalized CDF / survival at nodes
  double cdf_total_ = 1.0;                // raw mass the CDF table was normalized by
  double tail_rate_left_ = 1.0, tail_rate_right_ = 1.0;

  static double measure_log_mass(const std::vector<double>& logf, const Grid1D& g) {
    std::vector<double> w = simpson_weights(g);
    std::vector<double> terms(g.count);
    for (int i = 0; i < g.count; ++i)
      terms[i] = logf[i] + log_gauss_pdf(g.node(i)) + std::log(w[i]);
    return log_sum_exp(terms);
  }

  static void subtract_log_mass(std::vector<double>& logf, const Grid1D& g) {
    require(int(logf.size()) == g.count, "density: sample/grid size mismatch");
    for (double v : logf)
      if (!std::isfinite(v)) throw degenerate_error("density: non-finite log f sample");
    double lz = measure_log_mass(logf, g);
    for (double& v : logf) v -= lz;
  }

  static RelativeDensity1D build_grid(std::vector<double> logf, std::vector<double> dlogf,
                                      const Grid1D& g, double mass_tol) {
    require(int(logf.size()) == g.count, "density: sample/grid size mismatch");
    for (double v : logf)
      if (!std::isfinite(v)) throw degenerate_error("density: non-finite log f sample");
    RelativeDensity1D d;
    d.kind_ = DensityKind::grid;
    d.trunc_ = g;
    d.logf_ = std::move(logf);
    const double h = g.spacing();
    if (dlogf.empty()) {
      // central differences, one-sided second order at the ends
      dlogf.resize(g.count);
      for (int i = 1; i + 1 < g.count; ++i)
        dlogf[i] = (d.logf_[i + 1] - d.logf_[i - 1]) / (2.0 * h);
      dlogf[0] = (-3.0 * d.logf_[0] + 4.0 * d.logf_[1] - d.logf_[2]) / (2.0 * h);
      dlogf[g.count - 1] =
          (3.0 * d.logf_[g.count - 1] - 4.0 * d.logf_[g.count - 2] + d.logf_[g.count - 3]) /
          (2.0 * h);
    } else {
      require(int(dlogf.size()) == g.count, "density: derivative/grid size mismatch");
      for (double v : dlogf)
        if (!std::isfinite(v)) throw degenerate_error("density: non-finite dlog f sample");
    }
    d.dlogf_ = std::move(dlogf);
    d.finalize_grid(mass_tol);
    return d;
  }

  void finalize_grid(double mass_tol) {
    const int n = trunc_.count;
    std::vector<double> w = simpson_weights(trunc_);
    pdfw_.resize(n);
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
      pdfw_[i] = w[i] * std::exp(logf_[i] + log_gauss_pdf(trunc_.node(i)));
      mass += pdfw_[i];
    }
    if (std::abs(mass - 1.0) > mass_tol)
      throw degenerate_error("density: gamma-weighted mass deviates from 1 beyond tolerance");
    // coarser rule on every second node for error estimates; when the node
    // count is even the final stride is a short trapezoid patch
    half_idx_.clear();
    for (int i = 0; i < n; i += 2) half_idx_.push_back(i);
    if (half_idx_.back() != n - 1) half_idx_.push_back(n - 1);
    {
      const int m = int(half_idx_.size());
      half_pdfw_.assign(m, 0.0);
      auto node_pdf = [&](int k) {
        return std::exp(logf_[half_idx_[k]] + log_gauss_pdf(trunc_.node(half_idx_[k])));
      };
      bool uniform = (half_idx_[m - 1] - half_idx_[m - 2]) == 2;
      int mm = uniform ? m : m - 1;
      Grid1D gh(trunc_.lo, trunc_.node(half_idx_[mm - 1]), mm);
      std::vector<double> hw = simpson_weights(gh);
      for (int k = 0; k < mm; ++k) half_pdfw_[k] = hw[k] * node_pdf(k);
      if (!uniform) {
        double tail = trunc_.hi - trunc_.node(half_idx_[m - 2]);
        half_pdfw_[m - 2] += 0.5 * tail * node_pdf(m - 2);
        half_pdfw_[m - 1] += 0.5 * tail * node_pdf(m - 1);
      }
    }
    build_grid_cdf();
    double edge = std::max(logf_[0] + log_gauss_pdf(trunc_.lo),
                           logf_[n - 1] + log_gauss_pdf(trunc_.hi));
    trunc_warning_ = edge > std::log(1e-16);
  }

  // Cumulative distribution from the sampled Lebesgue density, with an
  // exponential tail model attached outside the truncation window.
  void build_grid_cdf() {
    const int n = trunc_.count;
    const double h = trunc_.spacing();
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = std::exp(logf_[i] + log_gauss_pdf(trunc_.node(i)));
    double dlp0 = dlogf_[0] - trunc_.lo;
    double dlpn = dlogf_[n - 1] - trunc_.hi;
    tail_rate_left_ = std::max(dlp0, 1.0);
    tail_rate_right_ = std::max(-dlpn, 1.0);
    double left_tail = p[0] / tail_rate_left_;
    double right_tail = p[n - 1] / tail_rate_right_;
    std::vector<double> F(n);
    F[0] = left_tail;
    for (int i = 1; i < n; ++i) {
      double inc;
      if (i % 2 == 0) {
        inc = h / 3.0 * (p[i - 2] + 4.0 * p[i - 1] + p[i]) -
              (F[i - 1] - F[i - 2]);  // close the Simpson pair
      } else if (i + 1 < n) {
        inc = h / 12.0 * (5.0 * p[i - 1] + 8.0 * p[i] - p[i + 1]);
      } else {
        inc = 0.5 * h * (p[i - 1] + p[i]);
      }
      if (inc < 0.0) inc = 0.0;
      F[i] = F[i - 1] + inc;
    }
    cdf_total_ = F[n - 1] + right_tail;
    cum_.resize(n);
    surv_.resize(n);
    for (int i = 0; i < n; ++i) {
      cum_[i] = F[i] / cdf_total_;
      surv_[i] = (F[n - 1] - F[i] + right_tail) / cdf_total_;
    }
  }

  double grid_cdf(double x) const {
    const int n = trunc_.count;
    if (x <= trunc_.lo) {
      double p0 = std::exp(logf_[0] + log_gauss_pdf(trunc_.lo));
      return std::min(cum_[0], (p0 / (tail_rate_left_ * cdf_total_)) *
                                   std::exp(tail_rate_left_ * (x - trunc_.lo)));
    }
    if (x >= trunc_.hi) return 1.0 - grid_sf(x);
    double t = (x - trunc_.lo) / trunc_.spacing();
    int i = std::min(int(t), n - 2);
    double xi = trunc_.node(i);
    double pi = std::exp(logf_[i] + log_gauss_pdf(xi));
    double px = lebesgue_pdf(x);
    return cum_[i] + 0.5 * (pi + px) * (x - xi) / cdf_total_;
  }

  double grid_sf(double x) const {
    const int n = trunc_.count;
    if (x >= trunc_.hi) {
      double pn = std::exp(logf_[n - 1] + log_gauss_pdf(trunc_.hi));
      return std::min(surv_[n - 1], (pn / (tail_rate_right_ * cdf_total_)) *
                                        std::exp(-tail_rate_right_ * (x - trunc_.hi)));
    }
    if (x <= trunc_.lo) return 1.0 - grid_cdf(x);
    double t = (x - trunc_.lo) / trunc_.spacing();
    int i = std::min(int(t) + 1, n - 1);
    double xi = trunc_.node(i);
    double pi = std::exp(logf_[i] + log_gauss_pdf(xi));
    double px = lebesgue_pdf(x);
    return surv_[i] + 0.5 * (pi + px) * (xi - x) / cdf_total_;
  }

  double grid_quantile(double p) const {
    const int n = trunc_.count;
    if (p <= cum_[0]) {
      double p0 = std::exp(logf_[0] + log_gauss_pdf(trunc_.lo));
      double arg = p * tail_rate_left_ * cdf_total_ / std::max(p0, 1e-300);
      return trunc_.lo + std::log(std::max(arg, 1e-300)) / tail_rate_left_;
    }
    if (p >= cum_[n - 1]) {
      double q = 1.0 - p;
      double pn = std::exp(logf_[n - 1] + log_gauss_pdf(trunc_.hi));
      double arg = q * tail_rate_right_ * cdf_total_ / std::max(pn, 1e-300);
      return trunc_.hi - std::log(std::max(arg, 1e-300)) / tail_rate_right_;
    }
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      if (cum_[mid] <= p)
        lo = mid;
      else
        hi = mid;
    }
    double x = trunc_.node(lo);
    for (int it = 0; it < 6; ++it) {
      double err = grid_cdf(x) - p;
      double dens = lebesgue_pdf(x);
      if (dens <= 1e-300) break;
      double step = err / dens;
      double cap = 2.0 * trunc_.spacing();
      if (step > cap) step = cap;
      if (step < -cap) step = -cap;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    return std::min(std::max(x, trunc_.lo), trunc_.hi);
  }

  double grid_quantile_upper(double q) const {
    const int n = trunc_.count;
    if (q <= surv_[n - 1]) {
      double pn = std::exp(logf_[n - 1] + log_gauss_pdf(trunc_.hi));
      double arg = q * tail_rate_right_ * cdf_total_ / std::max(pn, 1e-300);
      return trunc_.hi - std::log(std::max(arg, 1e-300)) / tail_rate_right_;
    }
    if (q >= surv_[0]) {
      double p = 1.0 - q;
      double p0 = std::exp(logf_[0] + log_gauss_pdf(trunc_.lo));
      double arg = std::max(p, 1e-300) * tail_rate_left_ * cdf_total_ / std::max(p0, 1e-300);
      return trunc_.lo + std::log(std::max(arg, 1e-300)) / tail_rate_left_;
    }
    int lo = 0, hi = n - 1;  // surv_ decreases in the index
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      if (surv_[mid] >= q)
        lo = mid;
      else
        hi = mid;
    }
    double x = trunc_.node(lo);
    for (int it = 0; it < 6; ++it) {
      double err = q - grid_sf(x);
      double dens = lebesgue_pdf(x);
      if (dens <= 1e-300) break;
      double step = err / dens;
      double cap = 2.0 * trunc_.spacing();
      if (step > cap) step = cap;
      if (step < -cap) step = -cap;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    return std::min(std::max(x, trunc_.lo), trunc_.hi);
  }

  // Piecewise-linear interpolation; log f extends linearly past the ends with
  // the edge slope, the derivative sticks to its edge value.
  double interp(const std::vector<double>& vals, double x, bool use_slope) const {
    const int n = trunc_.count;
    const double h = trunc_.spacing();
    if (x <= trunc_.lo) return vals[0] + (use_slope ? dlogf_[0] * (x - trunc_.lo) : 0.0);
    if (x >= trunc_.hi) return vals[n - 1] + (use_slope ? dlogf_[n - 1] * (x - trunc_.hi) : 0.0);
    double t = (x - trunc_.lo) / h;
    int i = std::min(int(t), n - 2);
    double frac = t - i;
    return vals[i] * (1.0 - frac) + vals[i + 1] * frac;
  }
};

// Product of independent 1D relative densities; represents nu_1 x ... x nu_n
// against the n-dimensional standard Gaussian.
struct ProductDensity {
  std::vector<RelativeDensity1D> components;

  ProductDensity() = default;
  explicit ProductDensity(std::vector<RelativeDensity1D> comps) : components(std::move(comps)) {
    require(!components.empty(), "ProductDensity: need at least one component");
  }

  int dimension() const { return int(components.size()); }

  std::vector<double> barycenter() const {
    std::vector<double> b;
    b.reserve(components.size());
    for (const auto& c : components) b.push_back(c.barycenter());
    return b;
  }

  ProductDensity recenter() const {
    std::vector<RelativeDensity1D> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(c.recenter());
    return ProductDensity(std::move(out));
  }
};

// Two-dimensional sampled relative density (phase-space bridge); log f on a
// tensor grid, normalized against the 2D standard Gaussian within 1e-6.
struct GridDensity2D {
  Grid1D grid1, grid2;
  std::vector<double> logf;  // row-major: index i2 * grid1.count + i1

  GridDensity2D(Grid1D g1, Grid1D g2, std::vector<double> values)
      : grid1(g1), grid2(g2), logf(std::move(values)) {
    require(int(logf.size()) == grid1.count * grid2.count,
            "GridDensity2D: sample/grid size mismatch");
    double m = mass();
    if (!(std::abs(m - 1.0) <= 1e-6))
      throw degenerate_error("GridDensity2D: gamma^2-weighted mass deviates from 1 beyond 1e-6");
  }

  double mass() const {
    std::vector<double> w1 = simpson_weights(grid1), w2 = simpson_weights(grid2);
    double s = 0.0;
    for (int j = 0; j < grid2.count; ++j) {
      double zj = grid2.node(j);
      double rowsum = 0.0;
      for (int i = 0; i < grid1.count; ++i) {
        double zi = grid1.node(i);
        rowsum += w1[i] * std::exp(logf[size_t(j) * grid1.count + i] + log_gauss_pdf(zi) +
                                   log_gauss_pdf(zj));
      }
      s += w2[j] * rowsum;
    }
    return s;
  }
};

// ============================================================
// Grid-density text format
// ============================================================

inline const char* grid_density_header() { return "# funcineq grid-density v1"; }

inline void save_grid_density(const std::string& path, const RelativeDensity1D& d) {
  std::ofstream out(path);
  if (!out) throw parameter_error("save_grid_density: cannot open output file");
  out << grid_density_header() << "\n";
  char buf[64];
  const Grid1D& g = d.truncation();
  for (int i = 0; i < g.count; ++i) {
    double x = g.node(i);
    std::snprintf(buf, sizeof buf, "%.17g\t%.17g", x, d.log_f(x));
    out << buf << "\n";
  }
}

inline RelativeDensity1D load_grid_density(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parameter_error("load_grid_density: cannot open input file");
  std::string line;
  if (!std::getline(in, line) || line != grid_density_header())
    throw parameter_error("load_grid_density: unrecognized header line");
  std::vector<double> xs, lf;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double x, v;
    if (!(row >> x >> v)) throw parameter_error("load_grid_density: malformed row");
    xs.push_back(x);
    lf.push_back(v);
  }
  if (xs.size() < 8) throw parameter_error("load_grid_density: too few rows");
  int n = int(xs.size());
  double h = (xs.back() - xs.front()) / (n - 1);
  if (!(h > 0.0)) throw parameter_error("load_grid_density: nodes not increasing");
  for (int i = 0; i < n; ++i)
    if (std::abs(xs[i] - (xs.front() + i * h)) > 1e-9 * (1.0 + std::abs(xs[i])))
      throw parameter_error("load_grid_density: grid not uniform");
  Grid1D g(xs.front(), xs.back(), n);
  return RelativeDensity1D::from_log_grid(std::move(lf), g);
}

}  // namespace funcineq
