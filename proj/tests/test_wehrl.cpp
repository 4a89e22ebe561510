#include <catch_amalgamated.hpp>

#include <sstream>

#include "funcineq/wehrl.hpp"

using namespace funcineq;
using Catch::Approx;

namespace {

constexpr double euler_gamma = 0.57721566490153286;

PhaseSpaceDensity extremal_density(double h) {
  PhaseSpaceDensity rho;
  rho.pgrid = phase_grid(h);
  rho.qgrid = phase_grid(h);
  rho.planck = h;
  rho.rho.resize(size_t(rho.pgrid.count) * rho.qgrid.count);
  for (int ip = 0; ip < rho.pgrid.count; ++ip)
    for (int iq = 0; iq < rho.qgrid.count; ++iq) {
      double p = rho.pgrid.node(ip), q = rho.qgrid.node(iq);
      rho.rho[size_t(ip) * rho.qgrid.count + iq] = std::exp(-pi * (p * p + q * q) / h);
    }
  return rho;
}

double param(const InequalityReport& r, const std::string& key) {
  for (const auto& kv : r.params)
    if (kv.first == key) return kv.second;
  FAIL("missing param " << key);
  return 0.0;
}

}  // namespace

TEST_CASE("synthetic extremal density has unit entropy") {
  for (double h : {pi, 2.0 * pi}) {
    CAPTURE(h);
    PhaseSpaceDensity rho = extremal_density(h);
    CHECK(std::abs(rho.mu_mass() - 1.0) <= 1e-6);
    FunctionalValue s = wehrl_entropy(rho);
    CHECK(s.value == Approx(1.0).margin(1e-3));
    CHECK(wehrl_deficit(rho).value == Approx(0.0).margin(1e-3));
  }
}

TEST_CASE("ground state transform matches the closed-form extremal") {
  double h = 2.0 * pi;
  auto rho = coherent_transform(coherent_state(h), phase_grid(h), phase_grid(h));
  CHECK(std::abs(rho.mu_mass() - 1.0) <= 1e-6);
  double worst = 0.0;
  for (int ip = 0; ip < rho.pgrid.count; ip += 8)
    for (int iq = 0; iq < rho.qgrid.count; iq += 8) {
      double p = rho.pgrid.node(ip), q = rho.qgrid.node(iq);
      worst = std::max(worst, std::abs(rho.at(ip, iq) - std::exp(-pi * (p * p + q * q) / h)));
    }
  CHECK(worst <= 2e-4);

  FunctionalValue s = wehrl_entropy(rho);
  CHECK(s.value == Approx(1.0).margin(2e-3));
  CHECK(wehrl_deficit(rho).value <= 2e-3);
  CHECK(wehrl_deficit(rho).value >= -2e-3);
}

TEST_CASE("carlen identity is state independent and scales with h") {
  double h2 = 2.0 * pi;
  auto ground = coherent_transform(coherent_state(h2), phase_grid(h2), phase_grid(h2));
  InequalityReport g2 = carlen_identity_check(ground, h2);
  CHECK(g2.pass);
  CHECK(g2.rhs == Approx(2.0).margin(1e-12));
  CHECK(g2.lhs == Approx(2.0).margin(2e-2));

  auto ground_pi = coherent_transform(coherent_state(pi), phase_grid(pi), phase_grid(pi));
  InequalityReport g1 = carlen_identity_check(ground_pi, pi);
  CHECK(g1.pass);
  CHECK(g1.lhs == Approx(4.0).margin(4e-2));

  auto excited = coherent_transform(fock_state(1, h2), phase_grid(h2), phase_grid(h2));
  InequalityReport e = carlen_identity_check(excited, h2);
  CHECK(e.pass);
  CHECK(e.lhs == Approx(2.0).margin(4e-2));

  auto displaced = coherent_transform(coherent_state(h2, 0.5, 1.0), phase_grid(h2, 1.5),
                                      phase_grid(h2, 1.5));
  InequalityReport d = carlen_identity_check(displaced, h2);
  CHECK(d.pass);
  CHECK(d.lhs == Approx(2.0).margin(4e-2));
  CHECK(param(d, "excluded_mass") <= 1e-8);
}

TEST_CASE("translation covariance of the transform") {
  double h = 2.0 * pi;
  double q0 = 1.0;
  auto rho = coherent_transform(coherent_state(h, 0.0, q0), phase_grid(h, q0),
                                phase_grid(h, q0));
  double worst = 0.0;
  for (int ip = 0; ip < rho.pgrid.count; ip += 8)
    for (int iq = 0; iq < rho.qgrid.count; iq += 8) {
      double p = rho.pgrid.node(ip), q = rho.qgrid.node(iq);
      double ref = std::exp(-pi * (p * p + (q - q0) * (q - q0)) / h);
      worst = std::max(worst, std::abs(rho.at(ip, iq) - ref));
    }
  CHECK(worst <= 2e-4);
}

TEST_CASE("conjugation symmetry keeps rho even in p for real symmetric states") {
  double h = pi;
  auto rho = coherent_transform(coherent_state(h), phase_grid(h, 0.0, 129),
                                phase_grid(h, 0.0, 129));
  int np = rho.pgrid.count;
  double worst = 0.0;
  for (int ip = 0; ip < np; ++ip)
    for (int iq = 0; iq < rho.qgrid.count; ++iq)
      worst = std::max(worst, std::abs(rho.at(ip, iq) - rho.at(np - 1 - ip, iq)));
  CHECK(worst <= 1e-13);
}

TEST_CASE("excited state entropy exceeds the bound strictly") {
  double h = 2.0 * pi;
  auto rho = coherent_transform(fock_state(1, h), phase_grid(h), phase_grid(h));
  FunctionalValue s = wehrl_entropy(rho);
  CHECK(s.value > 1.1);
  CHECK(s.value == Approx(1.0 + euler_gamma).margin(1e-4));

  auto fine = coherent_transform(fock_state(1, h), phase_grid(h, 0.0, 513),
                                 phase_grid(h, 0.0, 513));
  FunctionalValue s_fine = wehrl_entropy(fine);
  CHECK(s_fine.value > 1.1);
  CHECK(std::abs(s.value - s_fine.value) <= 1e-4);
}

TEST_CASE("wehrl bound holds on every transform image") {
  for (double h : {pi, 2.0 * pi, 6.62}) {
    CAPTURE(h);
    std::vector<PhaseSpaceDensity> images;
    images.push_back(coherent_transform(coherent_state(h), phase_grid(h), phase_grid(h)));
    images.push_back(coherent_transform(fock_state(1, h), phase_grid(h), phase_grid(h)));
    images.push_back(coherent_transform(coherent_state(h, 0.5, 1.0), phase_grid(h, 1.5),
                                        phase_grid(h, 1.5)));
    for (const auto& rho : images) {
      CHECK(std::abs(rho.mu_mass() - 1.0) <= 1e-6);
      CHECK(wehrl_entropy(rho).value >= 1.0 - 2e-3);
    }
  }
}

TEST_CASE("nu_rho rescales the phase plane against the 2D gaussian") {
  double h = 2.0 * pi;
  auto rho = coherent_transform(coherent_state(h), phase_grid(h), phase_grid(h));
  GridDensity2D nu = nu_rho(rho, h);
  double shs = std::sqrt(h / (2.0 * pi));
  CHECK(nu.grid1.lo == Approx(rho.pgrid.lo / shs).margin(1e-12));
  CHECK(nu.grid1.count == rho.pgrid.count);
  int mid = (nu.grid1.count / 2) * nu.grid1.count + nu.grid1.count / 2;
  CHECK(std::abs(nu.logf[size_t(mid)]) <= 1e-5);
  CHECK(std::abs(nu.mass() - 1.0) <= 1e-6);
}

TEST_CASE("lsi bridge on extremal, displaced, and excited states") {
  double h = 2.0 * pi;
  auto ground = coherent_transform(coherent_state(h), phase_grid(h), phase_grid(h));
  InequalityReport g = wehrl_lsi_bridge(ground, h);
  CHECK(g.pass);
  CHECK(std::abs(g.lhs) <= 2e-3);
  CHECK(std::abs(g.rhs) <= 2e-3);

  auto displaced = coherent_transform(coherent_state(h, 0.5, 1.0), phase_grid(h, 1.5),
                                      phase_grid(h, 1.5));
  InequalityReport d = wehrl_lsi_bridge(displaced, h);
  CHECK(d.pass);
  CHECK(std::abs(d.lhs) <= 2e-3);
  CHECK(param(d, "b_rho_q") == Approx(1.0).margin(5e-3));
  CHECK(std::abs(param(d, "b_rho_p")) == Approx(0.5).margin(5e-3));
  CHECK(param(d, "barycenter_gap") <= 1e-4);

  auto excited = coherent_transform(fock_state(1, h), phase_grid(h), phase_grid(h));
  InequalityReport e = wehrl_lsi_bridge(excited, h);
  CHECK(e.pass);
  CHECK(e.margin >= -1.5e-2);
  CHECK(e.rhs == Approx(euler_gamma).margin(1e-4));
}

TEST_CASE("hessian floor annotation on the extremal image") {
  double h = 2.0 * pi;
  auto rho = coherent_transform(coherent_state(h), phase_grid(h), phase_grid(h));
  InequalityReport lo = hessian_floor_check(rho, h, 0.5 * 2.0 * pi / h);
  CHECK(lo.pass);
  CHECK(lo.lhs == Approx(0.0).margin(1e-4));
  InequalityReport hi = hessian_floor_check(rho, h, 1.2 * 3.0 * pi / h);
  CHECK_FALSE(hi.pass);
  CHECK(hi.provenance.find("annotation") != std::string::npos);
}

TEST_CASE("phase space csv dump") {
  double h = pi;
  auto rho = coherent_transform(coherent_state(h), phase_grid(h, 0.0, 65),
                                phase_grid(h, 0.0, 65));
  std::string csv = phase_space_csv(rho);
  CHECK(csv.rfind("p,q,rho\n", 0) == 0);
  size_t lines = size_t(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines == size_t(rho.pgrid.count) * rho.qgrid.count + 1);
  std::istringstream in(csv);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  double p, q, r;
  char c1, c2;
  std::istringstream row(first);
  REQUIRE((row >> p >> c1 >> q >> c2 >> r));
  CHECK(p == Approx(rho.pgrid.lo));
  CHECK(q == Approx(rho.qgrid.lo));
  CHECK(r == Approx(rho.at(0, 0)));
}

TEST_CASE("error paths") {
  double h = 2.0 * pi;
  auto ground = coherent_state(h);
  CHECK_THROWS_AS(coherent_transform(ground, Grid1D(-1.0, 1.0, 65), Grid1D(-1.0, 1.0, 65)),
                  truncation_error);

  WaveFunction1D bad = ground;
  for (auto& v : bad.values) v *= 1.1;
  CHECK_THROWS_AS(coherent_transform(bad, phase_grid(h), phase_grid(h)), parameter_error);

  CHECK_THROWS_AS(make_wave(Grid1D(-1.0, 1.0, 65), h,
                            [](double) { return std::complex<double>(0.0, 0.0); }),
                  degenerate_error);
  CHECK_THROWS_AS(fock_state(13, h), parameter_error);
  CHECK_THROWS_AS(fock_state(-1, h), parameter_error);

  auto rho = coherent_transform(ground, phase_grid(h, 0.0, 129), phase_grid(h, 0.0, 129));
  CHECK_THROWS_AS(carlen_identity_check(rho, pi), parameter_error);
  CHECK_THROWS_AS(nu_rho(rho, 1.01 * h), parameter_error);

  PhaseSpaceDensity off = rho;
  for (auto& v : off.rho) v *= 1.01;
  CHECK_THROWS_AS(wehrl_entropy(off), parameter_error);
}
