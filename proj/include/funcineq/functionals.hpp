#pragma once

#include "funcineq/measures.hpp"

namespace funcineq {

// Relative entropy H(nu | gamma) = E_nu[log f].
inline FunctionalValue entropy(const RelativeDensity1D& nu) {
  FunctionalValue v = nu.expect_fv([&nu](double x) { return nu.log_f(x); });
  v.method = "entropy/" + v.method;
  return v;
}

// Relative Fisher information I(nu | gamma) = E_nu[((log f)')^2].
inline FunctionalValue fisher(const RelativeDensity1D& nu) {
  FunctionalValue v = nu.expect_fv([&nu](double x) {
    double d = nu.dlog_f(x);
    return d * d;
  });
  v.method = "fisher/" + v.method;
  return v;
}

// Fisher information relative to the shifted Gaussian gamma_b.
inline FunctionalValue fisher_to_tilt(const RelativeDensity1D& nu, double b) {
  require(std::isfinite(b), "fisher_to_tilt: need finite b");
  FunctionalValue v = nu.expect_fv([&nu, b](double x) {
    double d = nu.dlog_f(x) - b;
    return d * d;
  });
  v.method = "fisher_to_tilt/" + v.method;
  return v;
}

// L1 tilt gap: integral of |(log f)' - b| dnu. The integrand kinks wherever
// (log f)' crosses b, so the window is split at the sign changes and each
// smooth piece integrated on its own Simpson grid.
inline FunctionalValue tilt_l1(const RelativeDensity1D& nu, double b) {
  require(std::isfinite(b), "tilt_l1: need finite b");
  const Grid1D& g = nu.truncation();
  auto tilt = [&nu, b](double x) { return nu.dlog_f(x) - b; };

  const int scan = 4001;
  double maxabs = 0.0;
  std::vector<double> cuts{g.lo};
  double xprev = g.lo, dprev = tilt(g.lo);
  maxabs = std::abs(dprev);
  for (int i = 1; i < scan; ++i) {
    double x = g.lo + (g.hi - g.lo) * (double(i) / (scan - 1));
    double d = tilt(x);
    maxabs = std::max(maxabs, std::abs(d));
    if (d == 0.0) {
      cuts.push_back(x);
    } else if (dprev != 0.0 && (dprev < 0.0) != (d < 0.0)) {
      cuts.push_back(find_root(tilt, xprev, x, 1e-13));
    }
    if (d != 0.0) {
      xprev = x;
      dprev = d;
    }
  }
  cuts.push_back(g.hi);
  std::sort(cuts.begin(), cuts.end());

  FunctionalValue v;
  v.method = "tilt_l1/grid-simpson-split";
  if (maxabs == 0.0) return v;

  auto pass = [&](int nodes) {
    double total = 0.0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
      double a = cuts[k], c = cuts[k + 1];
      if (c - a < 1e-14) continue;
      Grid1D piece(a, c, nodes);
      std::vector<double> vals(piece.count);
      for (int i = 0; i < piece.count; ++i) {
        double x = piece.node(i);
        vals[i] = std::abs(tilt(x)) * std::exp(nu.lebesgue_log_pdf(x));
      }
      total += integrate_grid(vals, piece);
    }
    return total;
  };
  v.value = pass(801);
  v.est_error = std::abs(v.value - pass(401)) + 1e-12;
  return v;
}

// Deficit in the Gaussian logarithmic Sobolev inequality: (1/2) I - H >= 0.
inline FunctionalValue lsi_deficit(const RelativeDensity1D& nu) {
  FunctionalValue h = entropy(nu);
  FunctionalValue i = fisher(nu);
  FunctionalValue v;
  v.value = 0.5 * i.value - h.value;
  v.est_error = 0.5 * i.est_error + h.est_error;
  v.method = "lsi_deficit";
  return v;
}

// Total variation-type distance as the gamma-weighted L1 gap: integral of
// |f - 1| dgamma over the truncation window. Lies in [0, 2].
inline FunctionalValue total_variation(const RelativeDensity1D& nu) {
  const Grid1D& g = nu.truncation();
  std::vector<double> w = simpson_weights(g);
  auto sum_with = [&](int stride) {
    // stride 2 reuses every second node with doubled weights (trapezoid-grade
    // coarse pass used only for the error estimate)
    double s = 0.0;
    if (stride == 1) {
      for (int i = 0; i < g.count; ++i) {
        double x = g.node(i);
        s += w[i] * std::abs(nu.f(x) - 1.0) * gauss_pdf(x);
      }
    } else {
      for (int i = 0; i < g.count - 1; i += 2) {
        double x0 = g.node(i), x1 = g.node(std::min(i + 2, g.count - 1));
        double v0 = std::abs(nu.f(x0) - 1.0) * gauss_pdf(x0);
        double v1 = std::abs(nu.f(x1) - 1.0) * gauss_pdf(x1);
        s += 0.5 * (v0 + v1) * (x1 - x0);
      }
    }
    return s;
  };
  FunctionalValue v;
  v.value = sum_with(1);
  v.est_error = std::abs(v.value - sum_with(2)) + 1e-12;
  v.method = "total_variation/grid-simpson";
  return v;
}

// ---- product (tensorized) versions ----------------------------------------

inline FunctionalValue entropy(const ProductDensity& nu) {
  FunctionalValue v;
  v.method = "entropy/product";
  for (const auto& c : nu.components) {
    FunctionalValue part = entropy(c);
    v.value += part.value;
    v.est_error += part.est_error;
  }
  return v;
}

inline FunctionalValue fisher(const ProductDensity& nu) {
  FunctionalValue v;
  v.method = "fisher/product";
  for (const auto& c : nu.components) {
    FunctionalValue part = fisher(c);
    v.value += part.value;
    v.est_error += part.est_error;
  }
  return v;
}

inline FunctionalValue lsi_deficit(const ProductDensity& nu) {
  FunctionalValue h = entropy(nu);
  FunctionalValue i = fisher(nu);
  FunctionalValue v;
  v.value = 0.5 * i.value - h.value;
  v.est_error = 0.5 * i.est_error + h.est_error;
  v.method = "lsi_deficit/product";
  return v;
}

// ---- 2D grid versions (phase-space bridge) --------------------------------

namespace detail {

// One component of grad log f by central differences. A neighbor whose log value
// jumps by more than 20 marks an underflow artifact in the samples (genuine
// per-cell variation stays below a few units); the difference then falls back to
// the other side, or to zero when both sides jump — the density is negligible
// wherever that happens.
inline double logf_slope(const std::vector<double>& logf, size_t idx, size_t stride, bool has_lo,
                         bool has_hi, double h) {
  double c = logf[idx];
  double lo = has_lo ? logf[idx - stride] : 0.0;
  double hi = has_hi ? logf[idx + stride] : 0.0;
  bool lo_ok = has_lo && std::abs(lo - c) <= 20.0;
  bool hi_ok = has_hi && std::abs(hi - c) <= 20.0;
  if (lo_ok && hi_ok) return (hi - lo) / (2.0 * h);
  if (hi_ok) return (hi - c) / h;
  if (lo_ok) return (c - lo) / h;
  return 0.0;
}

inline bool grid2d_halvable(const GridDensity2D& nu) {
  return nu.grid1.count >= 9 && nu.grid2.count >= 9 && nu.grid1.count % 2 == 1 &&
         nu.grid2.count % 2 == 1;
}

template <class Node>
double grid2d_sum(const GridDensity2D& nu, int stride, Node&& node_value) {
  Grid1D s1(nu.grid1.lo, nu.grid1.hi, (nu.grid1.count - 1) / stride + 1);
  Grid1D s2(nu.grid2.lo, nu.grid2.hi, (nu.grid2.count - 1) / stride + 1);
  std::vector<double> w1 = simpson_weights(s1), w2 = simpson_weights(s2);
  double total = 0.0;
  for (int j = 0; j < s2.count; ++j) {
    double row = 0.0;
    for (int i = 0; i < s1.count; ++i) row += w1[i] * node_value(i * stride, j * stride);
    total += w2[j] * row;
  }
  return total;
}

inline double entropy2d_raw(const GridDensity2D& nu, int stride) {
  return grid2d_sum(nu, stride, [&](int i1, int i2) {
    double lf = nu.logf[size_t(i2) * nu.grid1.count + i1];
    return lf * std::exp(lf + log_gauss_pdf(nu.grid1.node(i1)) + log_gauss_pdf(nu.grid2.node(i2)));
  });
}

inline double fisher2d_raw(const GridDensity2D& nu, int stride) {
  int n1 = nu.grid1.count, n2 = nu.grid2.count;
  double h1 = nu.grid1.spacing() * stride, h2 = nu.grid2.spacing() * stride;
  return grid2d_sum(nu, stride, [&](int i1, int i2) {
    size_t idx = size_t(i2) * n1 + i1;
    double gx = logf_slope(nu.logf, idx, size_t(stride), i1 - stride >= 0, i1 + stride < n1, h1);
    double gy =
        logf_slope(nu.logf, idx, size_t(stride) * n1, i2 - stride >= 0, i2 + stride < n2, h2);
    return (gx * gx + gy * gy) * std::exp(nu.logf[idx] + log_gauss_pdf(nu.grid1.node(i1)) +
                                          log_gauss_pdf(nu.grid2.node(i2)));
  });
}

}  // namespace detail

inline FunctionalValue entropy(const GridDensity2D& nu) {
  FunctionalValue v;
  v.value = detail::entropy2d_raw(nu, 1);
  v.method = "entropy/grid2d-simpson";
  if (detail::grid2d_halvable(nu))
    v.est_error = std::abs(v.value - detail::entropy2d_raw(nu, 2)) + 1e-12;
  return v;
}

inline FunctionalValue fisher(const GridDensity2D& nu) {
  FunctionalValue v;
  v.value = detail::fisher2d_raw(nu, 1);
  v.method = "fisher/grid2d-central-diff";
  if (detail::grid2d_halvable(nu))
    v.est_error = std::abs(v.value - detail::fisher2d_raw(nu, 2)) + 1e-12;
  return v;
}

inline FunctionalValue lsi_deficit(const GridDensity2D& nu) {
  FunctionalValue h = entropy(nu);
  FunctionalValue i = fisher(nu);
  FunctionalValue v;
  v.value = 0.5 * i.value - h.value;
  v.est_error = 0.5 * i.est_error + h.est_error;
  v.method = "lsi_deficit/grid2d";
  return v;
}

}  // namespace funcineq
