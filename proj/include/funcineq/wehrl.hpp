#pragma once

#include <complex>
#include <string>
#include <vector>

#include "funcineq/functionals.hpp"
#include "funcineq/report.hpp"

namespace funcineq {

// L^2-normalized complex wave function sampled on a uniform grid, carrying its
// Planck parameter h (h_star = h/2pi sets every length scale of the transform).
struct WaveFunction1D {
  Grid1D grid;
  std::vector<std::complex<double>> values;
  double planck = 2.0 * pi;

  double h_star() const { return planck / (2.0 * pi); }

  double norm_sq() const {
    std::vector<double> w = simpson_weights(grid);
    double s = 0.0;
    for (int i = 0; i < grid.count; ++i) s += w[i] * std::norm(values[size_t(i)]);
    return s;
  }
};

// |L psi|^2 on a (p,q) tensor grid; rho is dimensionless and integrates to 1
// against dmu_h = dp dq / h.
struct PhaseSpaceDensity {
  Grid1D pgrid, qgrid;
  std::vector<double> rho;  // index ip * qgrid.count + iq
  double planck = 2.0 * pi;

  double h_star() const { return planck / (2.0 * pi); }
  double at(int ip, int iq) const { return rho[size_t(ip) * qgrid.count + iq]; }

  double mu_mass() const {
    std::vector<double> wp = simpson_weights(pgrid), wq = simpson_weights(qgrid);
    double s = 0.0;
    for (int ip = 0; ip < pgrid.count; ++ip) {
      double row = 0.0;
      for (int iq = 0; iq < qgrid.count; ++iq) row += wq[iq] * at(ip, iq);
      s += wp[ip] * row;
    }
    return s / planck;
  }
};

namespace detail {

template <class F>
double phase_sum(const Grid1D& pg, const Grid1D& qg, int stride, F&& node) {
  Grid1D s1(pg.lo, pg.hi, (pg.count - 1) / stride + 1);
  Grid1D s2(qg.lo, qg.hi, (qg.count - 1) / stride + 1);
  std::vector<double> w1 = simpson_weights(s1), w2 = simpson_weights(s2);
  double total = 0.0;
  for (int i = 0; i < s1.count; ++i) {
    double row = 0.0;
    for (int j = 0; j < s2.count; ++j) row += w2[j] * node(i * stride, j * stride);
    total += w1[i] * row;
  }
  return total;
}

inline bool phase_halvable(const PhaseSpaceDensity& rho) {
  return rho.pgrid.count >= 9 && rho.qgrid.count >= 9 && rho.pgrid.count % 2 == 1 &&
         rho.qgrid.count % 2 == 1;
}

inline void require_phase_normalized(const PhaseSpaceDensity& rho, const char* who) {
  if (!(std::abs(rho.mu_mass() - 1.0) <= 1e-4))
    throw parameter_error(std::string(who) + ": phase-space density not normalized within 1e-4");
}

inline void require_planck_match(const PhaseSpaceDensity& rho, double h, const char* who) {
  if (!(std::isfinite(h) && h > 0.0 && std::abs(h - rho.planck) <= 1e-12 * h))
    throw parameter_error(std::string(who) + ": h does not match the density's planck parameter");
}

}  // namespace detail

inline Grid1D wave_grid(double h, double center = 0.0, double pad = 0.0, int count = 4097) {
  require(std::isfinite(h) && h > 0.0, "wave_grid: need h > 0");
  double half = 12.0 * std::sqrt(h / (2.0 * pi)) + pad;
  return Grid1D(center - half, center + half, count);
}

inline Grid1D phase_grid(double h, double shift = 0.0, int count = 257) {
  require(std::isfinite(h) && h > 0.0, "phase_grid: need h > 0");
  double half = 12.0 * std::sqrt(h / (2.0 * pi)) + std::abs(shift);
  return Grid1D(-half, half, count);
}

// Sample a callable and normalize explicitly (all analytic prefactors are
// informal; the L^2 norm is enforced numerically).
template <class F>
WaveFunction1D make_wave(const Grid1D& g, double h, F&& f) {
  require(std::isfinite(h) && h > 0.0, "make_wave: need h > 0");
  WaveFunction1D psi;
  psi.grid = g;
  psi.planck = h;
  psi.values.resize(size_t(g.count));
  for (int i = 0; i < g.count; ++i) psi.values[size_t(i)] = f(g.node(i));
  double n = psi.norm_sq();
  if (!(n > 0.0 && std::isfinite(n))) throw degenerate_error("make_wave: zero or non-finite norm");
  double scale = 1.0 / std::sqrt(n);
  for (auto& v : psi.values) v *= scale;
  return psi;
}

// Coherent state centered at phase point (p0, q0).
inline WaveFunction1D coherent_state(double h, double p0 = 0.0, double q0 = 0.0) {
  double hs = h / (2.0 * pi);
  return make_wave(wave_grid(h, q0), h, [=](double x) {
    double u = x - q0;
    return std::polar(std::exp(-0.5 * u * u / hs), p0 * x / hs);
  });
}

// n-th Hermite eigenstate with width matched to h_star.
inline WaveFunction1D fock_state(int n, double h) {
  require(n >= 0 && n <= 12, "fock_state: need 0 <= n <= 12");
  double hs = h / (2.0 * pi);
  double pad = 3.0 * std::sqrt(double(n) + 1.0) * std::sqrt(hs);
  return make_wave(wave_grid(h, 0.0, pad), h, [=](double x) {
    double u = x / std::sqrt(hs);
    double h0 = 1.0, h1 = 2.0 * u;
    double hn = (n == 0) ? h0 : h1;
    for (int k = 1; k < n; ++k) {
      double next = 2.0 * u * hn - 2.0 * k * h0;
      h0 = hn;
      hn = next;
    }
    return std::complex<double>(hn * std::exp(-0.5 * u * u), 0.0);
  });
}

// rho(p,q) = |C(h) int e^{ipx/h*} e^{-(x-q)^2/2h*} psi(x) dx|^2 with the isometric
// prefactor C(h) = (pi h*)^{-1/4}; phase prefactors drop under the modulus.
inline PhaseSpaceDensity coherent_transform(const WaveFunction1D& psi, const Grid1D& pg,
                                            const Grid1D& qg) {
  if (!(std::abs(psi.norm_sq() - 1.0) <= 1e-8))
    throw parameter_error("coherent_transform: wave function not normalized within 1e-8");
  double hs = psi.h_star();
  double c2 = 1.0 / std::sqrt(pi * hs);
  const Grid1D& g = psi.grid;
  double hx = g.spacing();
  std::vector<double> wx = simpson_weights(g);

  PhaseSpaceDensity out;
  out.pgrid = pg;
  out.qgrid = qg;
  out.planck = psi.planck;
  out.rho.assign(size_t(pg.count) * qg.count, 0.0);

  double radius = std::sqrt(160.0 * hs);
  std::vector<std::complex<double>> a;
  for (int iq = 0; iq < qg.count; ++iq) {
    double q = qg.node(iq);
    int jlo = std::max(0, int(std::ceil((q - radius - g.lo) / hx)));
    int jhi = std::min(g.count - 1, int(std::floor((q + radius - g.lo) / hx)));
    if (jlo > jhi) continue;
    a.assign(size_t(jhi - jlo + 1), {});
    for (int j = jlo; j <= jhi; ++j) {
      double d = g.node(j) - q;
      a[size_t(j - jlo)] = wx[j] * std::exp(-0.5 * d * d / hs) * psi.values[size_t(j)];
    }
    double x0 = g.node(jlo);
    for (int ip = 0; ip < pg.count; ++ip) {
      double omega = pg.node(ip) / hs;
      std::complex<double> z = std::polar(1.0, omega * x0);
      std::complex<double> step = std::polar(1.0, omega * hx);
      std::complex<double> acc{0.0, 0.0};
      for (const auto& aj : a) {
        acc += aj * z;
        z *= step;
      }
      out.rho[size_t(ip) * qg.count + iq] = c2 * std::norm(acc);
    }
  }

  double mass = out.mu_mass();
  if (!(std::abs(mass - 1.0) <= 1e-4))
    throw truncation_error("coherent_transform: phase-space mass off by more than 1e-4 — "
                           "grids do not cover the support");
  return out;
}

inline FunctionalValue wehrl_entropy(const PhaseSpaceDensity& rho) {
  detail::require_phase_normalized(rho, "wehrl_entropy");
  auto raw = [&rho](int stride) {
    double s = detail::phase_sum(rho.pgrid, rho.qgrid, stride, [&rho](int ip, int iq) {
      double r = rho.at(ip, iq);
      return (r > 0.0) ? r * std::log(r) : 0.0;
    });
    return -s / rho.planck;
  };
  FunctionalValue v;
  v.value = raw(1);
  v.method = "wehrl_entropy/simpson2d";
  if (detail::phase_halvable(rho)) v.est_error = std::abs(v.value - raw(2)) + 1e-12;
  return v;
}

inline FunctionalValue wehrl_deficit(const PhaseSpaceDensity& rho) {
  FunctionalValue v = wehrl_entropy(rho);
  v.value -= 1.0;
  v.method = "wehrl_deficit/simpson2d";
  return v;
}

// Integral of |grad rho|^2 / rho over dmu_h against the state-independent value
// 4 pi / h (n = 1).
inline InequalityReport carlen_identity_check(const PhaseSpaceDensity& rho, double h) {
  detail::require_planck_match(rho, h, "carlen_identity_check");
  detail::require_phase_normalized(rho, "carlen_identity_check");
  int np = rho.pgrid.count, nq = rho.qgrid.count;
  double hp = rho.pgrid.spacing(), hq = rho.qgrid.spacing();
  std::vector<double> wp = simpson_weights(rho.pgrid), wq = simpson_weights(rho.qgrid);
  double lhs = 0.0, excluded = 0.0;
  for (int ip = 0; ip < np; ++ip) {
    for (int iq = 0; iq < nq; ++iq) {
      double r = rho.at(ip, iq);
      double w = wp[ip] * wq[iq] / h;
      if (!(r > 1e-12)) {
        excluded += w * std::max(r, 0.0);
        continue;
      }
      double rp_hi = rho.at(std::min(ip + 1, np - 1), iq);
      double rp_lo = rho.at(std::max(ip - 1, 0), iq);
      double dp = (rp_hi - rp_lo) / ((std::min(ip + 1, np - 1) - std::max(ip - 1, 0)) * hp);
      double rq_hi = rho.at(ip, std::min(iq + 1, nq - 1));
      double rq_lo = rho.at(ip, std::max(iq - 1, 0));
      double dq = (rq_hi - rq_lo) / ((std::min(iq + 1, nq - 1) - std::max(iq - 1, 0)) * hq);
      lhs += w * (dp * dp + dq * dq) / r;
    }
  }
  double rhs = 4.0 * pi / h;
  InequalityReport rep = make_report(
      "carlen_identity", lhs, rhs, -std::abs(lhs - rhs) / rhs, 2e-2,
      {{"h", h}, {"excluded_mass", excluded}},
      "central differences on the phase grid; nodes below density 1e-12 excluded");
  return rep;
}

// Gaussian-relative density on the rescaled phase plane: f(z) = e^{|z|^2/2} rho(sqrt(h*) z).
inline GridDensity2D nu_rho(const PhaseSpaceDensity& rho, double h) {
  detail::require_planck_match(rho, h, "nu_rho");
  detail::require_phase_normalized(rho, "nu_rho");
  double shs = std::sqrt(rho.h_star());
  int np = rho.pgrid.count, nq = rho.qgrid.count;
  Grid1D zp(rho.pgrid.lo / shs, rho.pgrid.hi / shs, np);
  Grid1D zq(rho.qgrid.lo / shs, rho.qgrid.hi / shs, nq);
  std::vector<double> logf(size_t(np) * nq);
  for (int iq = 0; iq < nq; ++iq) {
    double b = zq.node(iq);
    for (int ip = 0; ip < np; ++ip) {
      double a = zp.node(ip);
      logf[size_t(iq) * np + ip] =
          0.5 * (a * a + b * b) + std::log(std::max(rho.at(ip, iq), 1e-300));
    }
  }
  std::vector<double> w1 = simpson_weights(zp), w2 = simpson_weights(zq);
  double mass = 0.0;
  for (int iq = 0; iq < nq; ++iq) {
    double row = 0.0;
    for (int ip = 0; ip < np; ++ip)
      row += w1[ip] * std::exp(logf[size_t(iq) * np + ip] + log_gauss_pdf(zp.node(ip)) +
                               log_gauss_pdf(zq.node(iq)));
    mass += w2[iq] * row;
  }
  if (!(std::abs(mass - 1.0) <= 1e-5))
    throw truncation_error("nu_rho: gamma^2-weighted mass deviates beyond 1e-5");
  double shift = std::log(mass);
  for (double& v : logf) v -= shift;
  return GridDensity2D(zp, zq, std::move(logf));
}

// delta_LSI(nu_rho) against S(rho) - 1, plus the barycenter relation
// b_h = sqrt(2 pi / h) * b_rho.
inline InequalityReport wehrl_lsi_bridge(const PhaseSpaceDensity& rho, double h) {
  GridDensity2D nu = nu_rho(rho, h);
  FunctionalValue d = lsi_deficit(nu);
  FunctionalValue s = wehrl_entropy(rho);
  double lhs = d.value;
  double rhs = s.value - 1.0;

  std::vector<double> wp = simpson_weights(rho.pgrid), wq = simpson_weights(rho.qgrid);
  double bp = 0.0, bq = 0.0;
  for (int ip = 0; ip < rho.pgrid.count; ++ip)
    for (int iq = 0; iq < rho.qgrid.count; ++iq) {
      double m = wp[ip] * wq[iq] * rho.at(ip, iq) / h;
      bp += m * rho.pgrid.node(ip);
      bq += m * rho.qgrid.node(iq);
    }
  auto zmean = [&nu](bool first) {
    return detail::grid2d_sum(nu, 1, [&nu, first](int i1, int i2) {
      double z = first ? nu.grid1.node(i1) : nu.grid2.node(i2);
      return z * std::exp(nu.logf[size_t(i2) * nu.grid1.count + i1] +
                          log_gauss_pdf(nu.grid1.node(i1)) + log_gauss_pdf(nu.grid2.node(i2)));
    });
  };
  double bhp = zmean(true), bhq = zmean(false);
  double scale = std::sqrt(2.0 * pi / h);
  double bar_gap = std::max(std::abs(bhp - scale * bp), std::abs(bhq - scale * bq));

  double viol = std::max(std::abs(lhs - rhs) / std::max(std::abs(rhs), 0.1), bar_gap);
  return make_report("wehrl_lsi_bridge", lhs, rhs, -viol, 2e-2,
                     {{"entropy", s.value},
                      {"b_rho_p", bp},
                      {"b_rho_q", bq},
                      {"b_h_p", bhp},
                      {"b_h_q", bhq},
                      {"barycenter_gap", bar_gap}},
                     prov_note(d, s));
}

// Grid check of -Hess log f_h >= (M h / 2pi - 1) Id on nodes where the density is
// comfortably positive. Annotation only: this does not certify a 2D Poincare
// constant by itself.
inline InequalityReport hessian_floor_check(const PhaseSpaceDensity& rho, double h, double big_m) {
  require(std::isfinite(big_m) && big_m > 0.0, "hessian_floor_check: need M > 0");
  GridDensity2D nu = nu_rho(rho, h);
  int n1 = nu.grid1.count, n2 = nu.grid2.count;
  double h1 = nu.grid1.spacing(), h2 = nu.grid2.spacing();
  double floor_min = std::numeric_limits<double>::infinity();
  long checked = 0;
  for (int i2 = 1; i2 + 1 < n2; ++i2) {
    for (int i1 = 1; i1 + 1 < n1; ++i1) {
      bool ok = true;
      for (int d2 = -1; d2 <= 1 && ok; ++d2)
        for (int d1 = -1; d1 <= 1 && ok; ++d1)
          if (!(rho.at(i1 + d1, i2 + d2) >= 1e-10)) ok = false;
      if (!ok) continue;
      auto lf = [&](int a, int b) { return nu.logf[size_t(b) * n1 + a]; };
      double hxx = (lf(i1 - 1, i2) - 2.0 * lf(i1, i2) + lf(i1 + 1, i2)) / (h1 * h1);
      double hyy = (lf(i1, i2 - 1) - 2.0 * lf(i1, i2) + lf(i1, i2 + 1)) / (h2 * h2);
      double hxy = (lf(i1 + 1, i2 + 1) - lf(i1 + 1, i2 - 1) - lf(i1 - 1, i2 + 1) +
                    lf(i1 - 1, i2 - 1)) /
                   (4.0 * h1 * h2);
      double mean = 0.5 * (hxx + hyy);
      double rad = std::sqrt(0.25 * (hxx - hyy) * (hxx - hyy) + hxy * hxy);
      floor_min = std::min(floor_min, -mean - rad);
      ++checked;
    }
  }
  if (checked == 0)
    return make_skip("hessian_floor", {{"M", big_m}, {"h", h}},
                     "no interior node above the density threshold");
  double rhs = big_m * h / (2.0 * pi) - 1.0;
  return make_report("hessian_floor", floor_min, rhs, floor_min - rhs, 1e-9,
                     {{"M", big_m}, {"h", h}, {"nodes_checked", double(checked)}},
                     "grid second differences; annotation only — not an independent "
                     "Poincare certification");
}

inline std::string phase_space_csv(const PhaseSpaceDensity& rho) {
  std::string out = "p,q,rho\n";
  for (int ip = 0; ip < rho.pgrid.count; ++ip)
    for (int iq = 0; iq < rho.qgrid.count; ++iq) {
      out += format_double(rho.pgrid.node(ip));
      out += ',';
      out += format_double(rho.qgrid.node(iq));
      out += ',';
      out += format_double(rho.at(ip, iq));
      out += '\n';
    }
  return out;
}

}  // namespace funcineq
