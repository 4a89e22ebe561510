#pragma once

#include <functional>

#include "funcineq/constants.hpp"
#include "funcineq/functionals.hpp"
#include "funcineq/report.hpp"

namespace funcineq {

struct TraceSample {
  double t, H, I;
};

// A point along a flow plus the (t, H, I) samples recorded on the way there.
struct FlowState {
  double t = 0.0;
  RelativeDensity1D density;
  std::vector<TraceSample> trace;
};

// lambda_t = 1 / (lambda^{-1} e^{-2 eta t} + eta^{-1} (1 - e^{-2 eta t})):
// evolution of a Poincare constant along the flow with convexity floor eta.
inline double lambda_t(double lambda, double t, double eta = 1.0) {
  require(std::isfinite(lambda) && lambda > 0.0, "lambda_t: need lambda > 0");
  require(std::isfinite(eta) && eta > 0.0, "lambda_t: need eta > 0");
  require(std::isfinite(t) && t >= 0.0, "lambda_t: need t >= 0");
  double e = std::exp(-2.0 * eta * t);
  return 1.0 / (e / lambda + (1.0 - e) / eta);
}

namespace detail {

struct MehlerResult {
  std::vector<double> logf, dlogf, logf_coarse;
};

// Composite-Simpson evaluation of the smoothing integral at one point, used
// where the two Hermite orders disagree (strongly non-Gaussian integrands
// converge slowly and non-monotonically in the rule order). The window is
// marched outward from the mode until the integrand has fallen by e^-50,
// following through any interior rise toward a second mode.
inline void mehler_simpson(const RelativeDensity1D& nu, double decay, double spread, double x,
                           double y_star, int nodes, double& logf, double& dlogf) {
  auto l = [&](double y) { return nu.log_f(decay * x + spread * y) + log_gauss_pdf(y); };
  double peak = l(y_star);
  const double step = 0.25;
  auto march = [&](double dir) {
    double y = y_star, prev = peak;
    while (std::abs(y - y_star) < 80.0) {
      y += dir * step;
      double cur = l(y);
      peak = std::max(peak, cur);
      if (cur < peak - 50.0 && cur < prev) break;
      prev = cur;
    }
    return y;
  };
  double lo = march(-1.0), hi = march(+1.0);
  Grid1D yg(lo, hi, nodes);
  std::vector<double> vals(nodes), dvals(nodes);
  for (int k = 0; k < nodes; ++k) {
    double y = yg.node(k);
    vals[k] = std::exp(l(y) - peak);
    dvals[k] = vals[k] * nu.dlog_f(decay * x + spread * y);
  }
  double den = integrate_grid(vals, yg);
  double num = integrate_grid(dvals, yg);
  logf = peak + std::log(den);
  dlogf = decay * num / den;
}

// P_t f on the nodes of `g` by adaptive Gauss-Hermite in the Mehler integral:
// the y-rule is recentered at the mode y* of l(y) = log f(e^{-t}x + s y) - y^2/2
// and rescaled by its curvature (exact for Gaussian relative densities; a plain
// rule lets the far nodes, whose discrete weights decay slower than the
// continuum Gaussian, swamp growing integrands).  dlogf comes from
// e^{-t} P_t(f')/P_t f with the sums taken relative to the max exponent.
inline MehlerResult mehler_apply(const RelativeDensity1D& nu, double t, const Grid1D& g,
                                 int order_fine = 120, int order_coarse = 80) {
  const QuadratureRule& qf = cached_hermite_rule(order_fine);
  const QuadratureRule& qc = cached_hermite_rule(order_coarse);
  const double decay = std::exp(-t);
  const double spread = std::sqrt(std::max(0.0, -std::expm1(-2.0 * t)));
  MehlerResult out;
  out.logf.resize(g.count);
  out.dlogf.resize(g.count);
  out.logf_coarse.resize(g.count);

  auto eval = [&](double x, double y_star, double tau, const QuadratureRule& q,
                  double& logf, double& dlogf) {
    const size_t n = q.nodes.size();
    std::vector<double> a(n), d(n), raw(n);
    double raw_max = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < n; ++k) {
      double y = y_star + q.nodes[k] / tau;
      double arg = decay * x + spread * y;
      raw[k] = nu.log_f(arg) - 0.5 * y * y;
      raw_max = std::max(raw_max, raw[k]);
      a[k] = std::log(q.weights[k]) + raw[k] + 0.5 * q.nodes[k] * q.nodes[k];
      d[k] = nu.dlog_f(arg);
    }
    // Near the sqrt(2*order) edge the discrete weights exceed the continuum
    // Gaussian mass by an unbounded factor, so an edge node can fabricate a
    // maximum out of an integrand value that is actually negligible. A node
    // whose true log-integrand sits 46 below the peak contributes under
    // e^-46 of the mass and is dropped outright.
    double amax = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < n; ++k)
      if (raw[k] >= raw_max - 46.0) amax = std::max(amax, a[k]);
    double den = 0.0, num = 0.0;
    for (size_t k = 0; k < n; ++k) {
      if (raw[k] < raw_max - 46.0) continue;
      double e = std::exp(a[k] - amax);
      den += e;
      num += e * d[k];
    }
    logf = amax + std::log(den) - std::log(tau);
    dlogf = decay * num / den;
  };

  for (int i = 0; i < g.count; ++i) {
    double x = g.node(i);
    // Newton for the mode of l(y); curvature by finite differences of dlog f.
    double y_star = 0.0, curv = -1.0;
    if (spread > 0.0) {
      for (int it = 0; it < 50; ++it) {
        double arg = decay * x + spread * y_star;
        double grad = spread * nu.dlog_f(arg) - y_star;
        double delta = 1e-4 * (1.0 + std::abs(arg));
        double dd = (nu.dlog_f(arg + delta) - nu.dlog_f(arg - delta)) / (2.0 * delta);
        curv = std::min(spread * spread * dd - 1.0, -1e-6);
        double step = std::clamp(grad / (-curv), -3.0, 3.0);
        y_star += step;
        if (!(std::abs(y_star) < 60.0)) {
          y_star = 0.0;
          curv = -1.0;
          break;
        }
        if (std::abs(step) < 1e-11 * (1.0 + std::abs(y_star))) break;
      }
    }
    double tau = std::sqrt(-curv);
    eval(x, y_star, tau, qf, out.logf[i], out.dlogf[i]);
    double unused;
    eval(x, y_star, tau, qc, out.logf_coarse[i], unused);
    if (std::abs(std::expm1(out.logf[i] - out.logf_coarse[i])) > 2.5e-7) {
      mehler_simpson(nu, decay, spread, x, y_star, 1601, out.logf[i], out.dlogf[i]);
      double coarse_d;
      mehler_simpson(nu, decay, spread, x, y_star, 801, out.logf_coarse[i], coarse_d);
    }
  }
  return out;
}

}  // namespace detail

// Ornstein-Uhlenbeck evolution nu -> nu_t.  The result lives on the input's
// truncation grid; the quadrature error is self-estimated by comparing
// Gauss-Hermite orders 120 and 80 wherever the density is above 1e-16.
inline FlowState ou_evolve(const RelativeDensity1D& nu, double t) {
  require(std::isfinite(t) && t >= 0.0, "ou_evolve: need t >= 0");
  FlowState state;
  state.t = t;
  FunctionalValue h0 = entropy(nu), i0 = fisher(nu);
  if (t == 0.0) {
    state.density = nu;
    state.trace = {{0.0, h0.value, i0.value}, {0.0, h0.value, i0.value}};
    return state;
  }
  Grid1D g = nu.truncation();
  detail::MehlerResult r = detail::mehler_apply(nu, t, g);
  // Self-estimate: pointwise where the evolved density is non-negligible, plus
  // the L1 norm of the order-120-vs-80 density difference (what functionals see).
  double worst = 0.0;
  std::vector<double> dens(g.count), dens_gap(g.count);
  for (int i = 0; i < g.count; ++i) {
    double lphi = log_gauss_pdf(g.node(i));
    double rel = std::abs(std::expm1(r.logf[i] - r.logf_coarse[i]));
    dens[i] = std::exp(r.logf[i] + lphi);
    dens_gap[i] = std::abs(dens[i] - std::exp(r.logf_coarse[i] + lphi));
    if (r.logf[i] + lphi >= std::log(1e-10)) worst = std::max(worst, rel);
  }
  if (worst > 1e-6 || integrate_grid(dens_gap, g) > 1e-6)
    throw accuracy_error("ou_evolve: quadrature self-estimate above 1e-6");

  double mass = integrate_grid(dens, g);
  if (!(std::abs(mass - 1.0) <= 1e-5))
    throw accuracy_error("ou_evolve: evolved mass deviates beyond tolerance");
  double shift = std::log(mass);
  for (double& v : r.logf) v -= shift;
  state.density = RelativeDensity1D::from_log_grid(r.logf, r.dlogf, g, 1e-6);
  FunctionalValue h1 = entropy(state.density), i1 = fisher(state.density);
  state.trace = {{0.0, h0.value, i0.value}, {t, h1.value, i1.value}};
  return state;
}

// de Bruijn: H(nu) = integral of I(nu_t) over t >= 0.  Quadrature on [0,t_max]
// with the substitution t = t_max u^3 (clusters nodes near t=0 where I is
// largest), plus the exponential tail bound I(nu_t) <= I(nu_tmax) e^{-2(t-tmax)}.
inline InequalityReport de_bruijn_check(const RelativeDensity1D& nu, double t_max = 8.0,
                                        int steps = 64, double tolerance = 1e-3) {
  require(std::isfinite(t_max) && t_max > 0.0, "de_bruijn_check: need t_max > 0");
  require(steps >= 32, "de_bruijn_check: need steps >= 32");
  FunctionalValue h = entropy(nu);
  Grid1D ug(0.0, 1.0, steps + 1);
  std::vector<double> vals(ug.count);
  double fisher_at_tmax = 0.0;
  for (int i = 0; i < ug.count; ++i) {
    double u = ug.node(i);
    if (u == 0.0) {
      vals[i] = 0.0;
      continue;
    }
    double t = t_max * u * u * u;
    double it = (t == 0.0) ? fisher(nu).value : ou_evolve(nu, t).trace.back().I;
    if (i == ug.count - 1) fisher_at_tmax = it;
    vals[i] = it * 3.0 * t_max * u * u;
  }
  double integral = integrate_grid(vals, ug);
  double tail = 0.5 * fisher_at_tmax;
  double total = integral + tail;
  double rel = std::abs(h.value - total) / std::max(std::abs(h.value), 1e-8);
  return make_report("de_bruijn_identity", h.value, total, -rel, tolerance,
                     {{"t_max", t_max},
                      {"steps", double(steps)},
                      {"tail_bound", tail},
                      {"entropy", h.value}},
                     "relative error; " + prov_note(h));
}

// I(nu_t) <= I(nu) e^{-4t} lambda_t / lambda at each sample time; margin is the
// worst slack.  Equality within 1e-6 on the sharp family N(0, 1/lambda).
inline InequalityReport fisher_decay_check(const RelativeDensity1D& nu, double lambda,
                                           const std::vector<double>& times,
                                           double tolerance = 1e-6) {
  require(std::isfinite(lambda) && lambda > 0.0, "fisher_decay_check: need lambda > 0");
  require(!times.empty(), "fisher_decay_check: need at least one time");
  require(std::abs(nu.barycenter()) <= 1e-6,
          "fisher_decay_check: density must be centered (|barycenter| <= 1e-6)");
  FunctionalValue i0 = fisher(nu);
  std::vector<std::pair<std::string, double>> params{{"lambda", lambda},
                                                     {"fisher_0", i0.value}};
  double worst = std::numeric_limits<double>::infinity();
  double worst_lhs = 0.0, worst_rhs = 0.0;
  for (size_t k = 0; k < times.size(); ++k) {
    double t = times[k];
    require(std::isfinite(t) && t >= 0.0, "fisher_decay_check: need t >= 0");
    double it = ou_evolve(nu, t).trace.back().I;
    double bound = i0.value * std::exp(-4.0 * t) * lambda_t(lambda, t) / lambda;
    double m = bound - it;
    char key[32];
    std::snprintf(key, sizeof key, "margin_t%zu", k);
    params.emplace_back(key, m);
    params.emplace_back("t" + std::to_string(k), t);
    if (m < worst) {
      worst = m;
      worst_lhs = it;
      worst_rhs = bound;
    }
  }
  return make_report("fisher_decay", worst_lhs, worst_rhs, worst, tolerance, params,
                     prov_note(i0));
}

// ------------------------------------------------------------
// General 1D drift-diffusion flow
// ------------------------------------------------------------

// Potential with a uniform convexity floor eta <= V'' on the working window.
struct Potential1D {
  std::function<double(double)> V, dV, d2V;
  double eta = 1.0;

  static Potential1D gaussian() {
    return {[](double x) { return 0.5 * x * x; }, [](double x) { return x; },
            [](double) { return 1.0; }, 1.0};
  }
  // x^2/2 + a x^4: V'' = 1 + 12 a x^2 >= 1 for a >= 0.
  static Potential1D quartic(double a) {
    require(std::isfinite(a) && a >= 0.0, "Potential1D::quartic: need a >= 0");
    return {[a](double x) { return 0.5 * x * x + a * x * x * x * x; },
            [a](double x) { return x + 4.0 * a * x * x * x; },
            [a](double x) { return 1.0 + 12.0 * a * x * x; }, 1.0};
  }

  bool is_standard_gaussian(const Grid1D& g) const {
    double offset = V(0.0);
    for (double x : {g.lo, 0.3 * g.lo, 0.0, 0.4 * g.hi, g.hi})
      if (std::abs(V(x) - 0.5 * x * x - offset) > 1e-12) return false;
    return true;
  }
};

namespace detail {

// mu-relative state of a Fokker-Planck flow on a fixed grid.
struct FpWork {
  Grid1D g;
  std::vector<double> u;        // d nu / d mu at the nodes
  std::vector<double> m;        // e^{-V} at the nodes
  std::vector<double> m_half;   // e^{-V} at midpoints
  double log_zmu;               // log of the mu normalizer
  explicit FpWork(const Grid1D& grid) : g(grid) {}

  double mass() const {
    std::vector<double> v(g.count);
    for (int i = 0; i < g.count; ++i) v[i] = u[i] * m[i];
    return integrate_grid(v, g) * std::exp(-log_zmu);
  }
  double entropy_rel() const {
    std::vector<double> v(g.count);
    for (int i = 0; i < g.count; ++i)
      v[i] = (u[i] > 1e-300) ? u[i] * std::log(u[i]) * m[i] : 0.0;
    return integrate_grid(v, g) * std::exp(-log_zmu);
  }
  double fisher_rel() const {
    std::vector<double> v(g.count, 0.0);
    double h = g.spacing();
    for (int i = 1; i + 1 < g.count; ++i) {
      if (u[i] < 1e-250) continue;
      double du = (u[i + 1] - u[i - 1]) / (2.0 * h);
      v[i] = du * du / u[i] * m[i];
    }
    return integrate_grid(v, g) * std::exp(-log_zmu);
  }
};

inline FpWork fp_prepare(const Potential1D& pot, const RelativeDensity1D& nu) {
  FpWork w(nu.truncation());
  const Grid1D& g = w.g;
  double h = g.spacing();
  for (int i = 0; i < g.count; ++i) {
    double x = g.node(i);
    if (pot.d2V(x) < pot.eta - 1e-9)
      throw parameter_error("fp flow: V'' drops below the declared eta on the grid");
    w.m.push_back(std::max(std::exp(-pot.V(x)), 1e-300));
  }
  for (int i = 0; i + 1 < g.count; ++i)
    w.m_half.push_back(std::max(std::exp(-pot.V(g.node(i) + 0.5 * h)), 1e-300));
  w.log_zmu = std::log(integrate_grid(w.m, g));
  w.u.resize(g.count);
  for (int i = 0; i < g.count; ++i)
    w.u[i] = std::exp(nu.lebesgue_log_pdf(g.node(i)) + pot.V(g.node(i)) + w.log_zmu);
  return w;
}

// One implicit Euler step of du/dt = (1/m) d(m du/dx)/dx with no-flux ends.
inline void fp_step(FpWork& w, double dt) {
  const int n = w.g.count;
  double h = w.g.spacing();
  double r = dt / (h * h);
  std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs = w.u;
  for (int i = 0; i < n; ++i) {
    double left = (i > 0) ? w.m_half[i - 1] / w.m[i] : 0.0;
    double right = (i + 1 < n) ? w.m_half[i] / w.m[i] : 0.0;
    diag[i] = 1.0 + r * (left + right);
    if (i > 0) lower[i] = -r * left;
    if (i + 1 < n) upper[i] = -r * right;
  }
  for (int i = 1; i < n; ++i) {
    double factor = lower[i] / diag[i - 1];
    diag[i] -= factor * upper[i - 1];
    rhs[i] -= factor * rhs[i - 1];
  }
  w.u[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i) w.u[i] = (rhs[i] - upper[i] * w.u[i + 1]) / diag[i];
}

inline RelativeDensity1D fp_to_density(const FpWork& w) {
  std::vector<double> logf(w.g.count);
  for (int i = 0; i < w.g.count; ++i) {
    double x = w.g.node(i);
    double lu = std::log(std::max(w.u[i], 1e-300));
    logf[i] = lu + std::log(w.m[i]) - w.log_zmu + 0.5 * x * x + log_sqrt_2pi;
  }
  return RelativeDensity1D::from_log_grid(logf, {}, w.g, 1e-5);
}

}  // namespace detail

// Evolve nu under the drift-diffusion flow for potential V by implicit Euler
// in divergence form (mass- and positivity-preserving).  The trace records
// mu-relative entropy and Fisher information at `records` evenly spaced times.
inline FlowState fp_evolve(const Potential1D& pot, const RelativeDensity1D& nu, double t,
                           int records = 17) {
  require(std::isfinite(t) && t >= 0.0, "fp_evolve: need t >= 0");
  require(records >= 2, "fp_evolve: need records >= 2");
  detail::FpWork w = detail::fp_prepare(pot, nu);
  double mass0 = w.mass();
  if (std::abs(mass0 - 1.0) > 1e-4)
    throw accuracy_error("fp_evolve: initial mass deviates from 1 beyond 1e-4");

  FlowState state;
  state.trace.push_back({0.0, w.entropy_rel(), w.fisher_rel()});
  double h = w.g.spacing();
  double dt = std::min(1e-3, h * h);
  double now = 0.0;
  for (int rec = 1; rec < records; ++rec) {
    double target = t * double(rec) / (records - 1);
    while (now < target - 1e-15) {
      double step = std::min(dt, target - now);
      detail::fp_step(w, step);
      now += step;
    }
    if (std::abs(w.mass() - mass0) > 1e-6)
      throw accuracy_error("fp_evolve: mass drift above 1e-6");
    state.trace.push_back({target, w.entropy_rel(), w.fisher_rel()});
  }
  state.t = t;
  state.density = detail::fp_to_density(w);
  return state;
}

// Sharp log-Sobolev constant of the eta-convex flow at Poincare level lambda:
// (eta - lambda - lambda(ln eta - ln lambda)) / (2 (eta-lambda)^2), continuous
// across lambda = eta where it equals 1/(4 eta).
inline double be_constant(double eta, double lambda) {
  require(std::isfinite(eta) && eta > 0.0, "be_constant: need eta > 0");
  require(std::isfinite(lambda) && lambda > 0.0, "be_constant: need lambda > 0");
  return c_lambda(lambda / eta) / (2.0 * eta);
}

// Entropy bound H <= be_constant(eta,lambda) I plus the Fisher decay
// I(nu_t | mu) <= e^{-4 eta t} (lambda_t / lambda) I(nu | mu) at sample times,
// for even V and even relative density.  margin is the worst slack observed.
inline InequalityReport be_check(const Potential1D& pot, double eta,
                                 const RelativeDensity1D& nu, double lambda,
                                 const std::vector<double>& times = {0.25, 0.5, 1.0},
                                 double tolerance = 1e-5) {
  require(std::isfinite(eta) && eta > 0.0, "be_check: need eta > 0");
  require(std::isfinite(lambda) && lambda > 0.0, "be_check: need lambda > 0");
  Grid1D g = nu.truncation();
  for (int i = 0; i < 201; ++i) {
    double x = g.lo + (g.hi - g.lo) * i / 200.0;
    if (std::abs(x) > std::min(std::abs(g.lo), std::abs(g.hi))) continue;
    if (std::abs(pot.V(x) - pot.V(-x)) > 1e-8 * std::max(1.0, std::abs(pot.V(x))))
      throw parameter_error("be_check: V must be even");
    if (std::abs(nu.log_f(x) - nu.log_f(-x)) > 1e-8)
      throw parameter_error("be_check: relative density must be even");
  }

  const bool gaussian_flow = pot.is_standard_gaussian(g);
  detail::FpWork w = detail::fp_prepare(pot, nu);
  double H = w.entropy_rel(), I = w.fisher_rel();
  if (gaussian_flow) {
    H = entropy(nu).value;
    I = fisher(nu).value;
  }
  double bc = be_constant(eta, lambda);
  double entropy_margin = bc * I - H;

  std::vector<std::pair<std::string, double>> params{
      {"eta", eta}, {"lambda", lambda}, {"be_constant", bc},
      {"H", H},     {"I", I},           {"entropy_margin", entropy_margin}};
  double worst = entropy_margin;
  double worst_lhs = H, worst_rhs = bc * I;
  std::vector<double> sorted_times = times;
  std::sort(sorted_times.begin(), sorted_times.end());
  double now = 0.0;
  for (size_t k = 0; k < sorted_times.size(); ++k) {
    double t = sorted_times[k];
    require(std::isfinite(t) && t >= 0.0, "be_check: need t >= 0");
    double it;
    if (gaussian_flow) {
      it = ou_evolve(nu, t).trace.back().I;
    } else {
      double dt = std::min(1e-3, w.g.spacing() * w.g.spacing());
      while (now < t - 1e-15) {
        double step = std::min(dt, t - now);
        detail::fp_step(w, step);
        now += step;
      }
      it = w.fisher_rel();
    }
    double bound = std::exp(-4.0 * eta * t) * (lambda_t(lambda, t, eta) / lambda) * I;
    double m = bound - it;
    params.emplace_back("decay_t" + std::to_string(k), t);
    params.emplace_back("decay_margin" + std::to_string(k), m);
    if (m < worst) {
      worst = m;
      worst_lhs = it;
      worst_rhs = bound;
    }
  }
  return make_report("bakry_emery", worst_lhs, worst_rhs, worst, tolerance, params,
                     gaussian_flow ? "ou quadrature flow" : "implicit euler fp flow");
}

}  // namespace funcineq
