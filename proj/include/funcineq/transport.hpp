#pragma once

#include <algorithm>
#include <numeric>

#include "funcineq/functionals.hpp"

namespace funcineq {

// ============================================================
// Comparison functions
// ============================================================

// phi(t) = t - log(1+t), defined on (-1, inf), vanishing to second order at 0.
inline double phi(double t) {
  require(std::isfinite(t) && t > -1.0, "phi: argument must exceed -1");
  return t - std::log1p(t);
}

// Even convex minorant used for the transport chains: t^2/6 inside [-1,1],
// phi(|t|) - 5/6 + log 2 outside (continuous at |t| = 1).
inline double tilde_phi(double t) {
  require(std::isfinite(t), "tilde_phi: non-finite argument");
  double a = std::abs(t);
  if (a <= 1.0) return a * a / 6.0;
  return phi(a) - 5.0 / 6.0 + std::log(2.0);
}

// Inverse of tilde_phi on [0, inf).
inline double tilde_phi_inv(double y) {
  require(std::isfinite(y) && y >= 0.0, "tilde_phi_inv: need y >= 0");
  if (y <= 1.0 / 6.0) return std::sqrt(6.0 * y);
  // solve phi(v) = y + 5/6 - log 2 for v >= 1 by Newton (phi' = v/(1+v))
  double target = y + 5.0 / 6.0 - std::log(2.0);
  double v = target + 1.0 + std::log(1.0 + target);
  for (int it = 0; it < 60; ++it) {
    double g = phi(v) - target;
    double step = g * (1.0 + v) / v;
    v -= step;
    if (std::abs(step) < 1e-14 * (1.0 + v)) break;
  }
  return v;
}

// ============================================================
// Monotone transport
// ============================================================

// Monotone rearrangement T = G^{-1} o F pushing source to target, stored with
// a quantile table at cosine-spaced probabilities (clustered toward the tails).
struct TransportMap1D {
  RelativeDensity1D source, target;
  std::vector<double> table_p, table_x, table_t;

  double operator()(double x) const {
    double p = source.cdf(x);
    if (p <= 0.5) {
      p = std::max(p, 1e-300);
      return target.quantile(p);
    }
    double q = std::max(source.sf(x), 1e-300);
    return target.quantile_upper(q);
  }

  // T'(x) as the Monge-Ampere density ratio p_source(x) / p_target(T(x)).
  double log_derivative(double x) const {
    return source.lebesgue_log_pdf(x) - target.lebesgue_log_pdf((*this)(x));
  }
  double derivative(double x) const { return std::exp(log_derivative(x)); }
};

inline TransportMap1D monotone_map(const RelativeDensity1D& source,
                                   const RelativeDensity1D& target, int table_size = 4001) {
  require(table_size >= 16, "monotone_map: table_size too small");
  TransportMap1D map{source, target, {}, {}, {}};
  map.table_p.resize(table_size);
  map.table_x.resize(table_size);
  map.table_t.resize(table_size);
  for (int j = 0; j < table_size; ++j) {
    double p = 0.5 * (1.0 - std::cos(pi * (j + 0.5) / table_size));
    map.table_p[j] = p;
    map.table_x[j] = source.quantile(p);
    map.table_t[j] = target.quantile(p);
  }
  double worst = 0.0;
  for (int j = 0; j < table_size; ++j) {
    if (j > 0 && !(map.table_t[j] >= map.table_t[j - 1]))
      throw map_error("monotone_map: quantile table is not monotone");
    worst = std::max(worst, std::abs(source.cdf(map.table_x[j]) - map.table_p[j]));
    worst = std::max(worst, std::abs(target.cdf(map.table_t[j]) - map.table_p[j]));
  }
  if (worst > 1e-8)
    throw map_error("monotone_map: push-forward check exceeded 1e-8 at the table nodes");
  return map;
}

// ============================================================
// Wasserstein distances
// ============================================================

// Quadratic Wasserstein distance W2(nu, mu) through the monotone coupling.
inline FunctionalValue w2_1d(const RelativeDensity1D& nu, const RelativeDensity1D& mu) {
  TransportMap1D map = monotone_map(nu, mu);
  FunctionalValue cost = nu.expect_fv([&map](double x) {
    double d = x - map(x);
    return d * d;
  });
  FunctionalValue out;
  double c = std::max(cost.value, 0.0);
  out.value = std::sqrt(c);
  out.est_error = (out.value > 1e-9) ? cost.est_error / (2.0 * out.value)
                                     : std::sqrt(cost.est_error);
  out.method = "w2/monotone-coupling";
  return out;
}

// integral over the monotone coupling of |x - T(x)| dnu
inline double w1_coupling(const RelativeDensity1D& nu, const RelativeDensity1D& mu) {
  TransportMap1D map = monotone_map(nu, mu);
  return nu.expect([&map](double x) { return std::abs(x - map(x)); });
}

namespace detail {

// integral of |F_nu - F_mu| over [lo, hi], splitting at sign changes so each
// piece integrates a smooth one-signed difference
inline double cdf_area_between(const RelativeDensity1D& nu, const RelativeDensity1D& mu,
                               double lo, double hi) {
  auto D = [&](double x) { return nu.cdf(x) - mu.cdf(x); };
  const int scan = 4001;
  std::vector<double> cuts{lo};
  double xprev = lo, dprev = D(lo);
  for (int i = 1; i < scan; ++i) {
    double x = lo + (hi - lo) * (double(i) / (scan - 1));
    double d = D(x);
    if (d == 0.0) {
      cuts.push_back(x);
    } else if (dprev != 0.0 && (dprev < 0.0) != (d < 0.0)) {
      cuts.push_back(find_root(D, xprev, x, 1e-13));
    }
    if (d != 0.0) {
      xprev = x;
      dprev = d;
    }
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    double a = cuts[k], b = cuts[k + 1];
    if (b - a < 1e-14) continue;
    Grid1D g(a, b, 801);
    std::vector<double> v(g.count);
    for (int i = 0; i < g.count; ++i) v[i] = D(g.node(i));
    total += std::abs(integrate_grid(v, g));
  }
  return total;
}

// Beyond the region where either cdf tail of the source is resolvable in
// double precision the quantile composition degenerates (the map plateaus at
// the clamped extreme quantile), so integrands built from T there are noise.
// The true weight carried by that region is under 1e-13 of the mass.
inline bool tail_resolved(const TransportMap1D& map, double x) {
  return std::min(map.source.cdf(x), map.source.sf(x)) >= 1e-13;
}

}  // namespace detail

// First-order Wasserstein distance via the CDF-difference area, cross-checked
// against the coupling form; est_error records their disagreement.
inline FunctionalValue w1_1d(const RelativeDensity1D& nu, const RelativeDensity1D& mu) {
  double lo = std::min(nu.truncation().lo, mu.truncation().lo);
  double hi = std::max(nu.truncation().hi, mu.truncation().hi);
  double area = detail::cdf_area_between(nu, mu, lo, hi);
  double coupling = w1_coupling(nu, mu);
  FunctionalValue out;
  out.value = area;
  out.est_error = std::abs(area - coupling) + 1e-12;
  out.method = "w1/cdf-area-vs-coupling";
  return out;
}

// Coordinatewise-sum transport cost (the W_{1,1} distance between products).
inline FunctionalValue w11_product(const ProductDensity& nu, const ProductDensity& mu) {
  require(nu.dimension() == mu.dimension(), "w11_product: dimension mismatch");
  FunctionalValue out;
  out.method = "w11/coordinate-sum";
  for (int i = 0; i < nu.dimension(); ++i) {
    FunctionalValue part = w1_1d(nu.components[i], mu.components[i]);
    out.value += part.value;
    out.est_error += part.est_error;
  }
  return out;
}

inline ProductDensity standard_gaussian_product(int n) {
  std::vector<RelativeDensity1D> comps(n, RelativeDensity1D::standard_gaussian());
  return ProductDensity(std::move(comps));
}

// ============================================================
// Talagrand deficit
// ============================================================

// delta_Tal(nu) = 2 H(nu|gamma) - W2(nu, gamma)^2 >= 0.
inline FunctionalValue tal_deficit(const RelativeDensity1D& nu) {
  FunctionalValue h = entropy(nu);
  FunctionalValue w = w2_1d(nu, RelativeDensity1D::standard_gaussian());
  FunctionalValue out;
  out.value = 2.0 * h.value - w.value * w.value;
  out.est_error = 2.0 * h.est_error + 2.0 * w.value * w.est_error;
  out.method = "tal_deficit";
  return out;
}

inline FunctionalValue tal_deficit(const ProductDensity& nu) {
  FunctionalValue out;
  out.method = "tal_deficit/product";
  for (const auto& c : nu.components) {
    FunctionalValue part = tal_deficit(c);
    out.value += part.value;
    out.est_error += part.est_error;
  }
  return out;
}

// Lower bound from the dimension-aware transport inequality:
// c * min(w11^2 / n, w11 / sqrt(n)).
inline double tal_lower_bound(double w11, int n, double c = 1.0 / 288.0) {
  require(std::isfinite(w11) && w11 >= 0.0, "tal_lower_bound: need w11 >= 0");
  require(n >= 1, "tal_lower_bound: need n >= 1");
  require(std::isfinite(c) && c > 0.0, "tal_lower_bound: need c > 0");
  return c * std::min(w11 * w11 / n, w11 / std::sqrt(double(n)));
}

// ============================================================
// Transport gap integrals
// ============================================================

// integral of (T(x) - x + (log f)'(x))^2 dnu for the map T: nu -> gamma.
inline FunctionalValue cordero_gap_quadratic(const RelativeDensity1D& nu) {
  TransportMap1D map = monotone_map(nu, RelativeDensity1D::standard_gaussian());
  FunctionalValue v = nu.expect_fv([&](double x) {
    if (!detail::tail_resolved(map, x)) return 0.0;
    double r = map(x) - x + nu.dlog_f(x);
    return r * r;
  });
  v.method = "cordero_quadratic/" + v.method;
  return v;
}

// integral of [T' - 1 - log T'] dnu, evaluated through log T' for stability.
inline FunctionalValue cordero_gap_log(const RelativeDensity1D& nu) {
  TransportMap1D map = monotone_map(nu, RelativeDensity1D::standard_gaussian());
  FunctionalValue v = nu.expect_fv([&](double x) {
    if (!detail::tail_resolved(map, x)) return 0.0;
    double lt = map.log_derivative(x);
    return std::expm1(lt) - lt;
  });
  v.method = "cordero_log/" + v.method;
  return v;
}

// integral of |T' - 1| dnu, the input to the tilde_phi chain.
inline FunctionalValue cordero_t_prime_l1(const RelativeDensity1D& nu) {
  TransportMap1D map = monotone_map(nu, RelativeDensity1D::standard_gaussian());
  FunctionalValue v = nu.expect_fv([&](double x) {
    if (!detail::tail_resolved(map, x)) return 0.0;
    return std::abs(std::expm1(map.log_derivative(x)));
  });
  v.method = "cordero_tprime_l1/" + v.method;
  return v;
}

// ============================================================
// Discrete optimal transport oracle
// ============================================================

enum class DiscreteCost { l1, l2_squared };

// Uniformly weighted point cloud in R^d with at most 8 atoms.
struct DiscreteMeasure {
  std::vector<std::vector<double>> atoms;

  explicit DiscreteMeasure(std::vector<std::vector<double>> pts) : atoms(std::move(pts)) {
    require(!atoms.empty() && atoms.size() <= 8, "DiscreteMeasure: need 1..8 atoms");
    for (const auto& a : atoms)
      require(a.size() == atoms.front().size(), "DiscreteMeasure: mixed dimensions");
  }
  int size() const { return int(atoms.size()); }
  int dimension() const { return int(atoms.front().size()); }
};

// Exhaustive minimum over all assignments; the k <= 8 cap keeps k! tractable.
inline double discrete_ot_oracle(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                 DiscreteCost cost) {
  require(a.size() == b.size(), "discrete_ot_oracle: atom counts differ");
  require(a.dimension() == b.dimension(), "discrete_ot_oracle: dimensions differ");
  const int k = a.size();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      const auto& x = a.atoms[i];
      const auto& y = b.atoms[perm[i]];
      for (size_t d = 0; d < x.size(); ++d) {
        double diff = x[d] - y[d];
        total += (cost == DiscreteCost::l1) ? std::abs(diff) : diff * diff;
      }
    }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace funcineq
