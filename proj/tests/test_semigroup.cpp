#include <catch_amalgamated.hpp>

#include "funcineq/semigroup.hpp"

using namespace funcineq;
using Catch::Approx;

namespace {

double gauss_leb_logpdf(double x, double m, double s) {
  return -0.5 * (x - m) * (x - m) / s - 0.5 * std::log(2.0 * pi * s);
}

RelativeDensity1D cosh_density(double beta) {
  Grid1D g(-12.0, 12.0, 8001);
  std::vector<double> logf(g.count), dlogf(g.count);
  for (int i = 0; i < g.count; ++i) {
    double x = g.node(i);
    logf[i] = std::log(std::cosh(beta * x)) - 0.5 * beta * beta;
    dlogf[i] = beta * std::tanh(beta * x);
  }
  return RelativeDensity1D::from_log_grid(logf, dlogf, g, 1e-8);
}

RelativeDensity1D quartic_even_density(double a) {
  Grid1D g(-6.0, 6.0, 1201);
  std::vector<double> raw(g.count);
  for (int i = 0; i < g.count; ++i) {
    double x = g.node(i);
    raw[i] = -0.25 * x * x - a * x * x * x * x;
  }
  return RelativeDensity1D::normalize(raw, g);
}

}  // namespace

TEST_CASE("lambda_t closed forms") {
  for (double t : {0.0, 0.3, 2.0}) CHECK(lambda_t(1.0, t) == Approx(1.0).margin(1e-14));
  CHECK(lambda_t(0.5, 0.5 * std::log(2.0)) == Approx(2.0 / 3.0).margin(1e-12));
  CHECK(lambda_t(2.0, 20.0) == Approx(1.0).margin(1e-12));
  CHECK(lambda_t(0.5, 0.0) == Approx(0.5).margin(1e-15));
  CHECK(lambda_t(1.0, 30.0, 2.0) == Approx(2.0).margin(1e-10));
  double prev = lambda_t(0.25, 0.0);
  for (double t = 0.1; t <= 3.0; t += 0.1) {
    double cur = lambda_t(0.25, t);
    CHECK(cur >= prev - 1e-14);
    prev = cur;
  }
  CHECK_THROWS_AS(lambda_t(0.0, 1.0), parameter_error);
  CHECK_THROWS_AS(lambda_t(1.0, -0.1), parameter_error);
  CHECK_THROWS_AS(lambda_t(1.0, 1.0, 0.0), parameter_error);
}

TEST_CASE("ou_evolve fixed point and closed-form flows") {
  auto gamma = RelativeDensity1D::standard_gaussian();
  FlowState fixed = ou_evolve(gamma, 0.8);
  for (double x : {-5.0, -1.0, 0.0, 2.0, 5.0})
    CHECK(fixed.density.log_f(x) == Approx(0.0).margin(1e-10));

  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);
  double t = 0.5;
  FlowState st = ou_evolve(n02, t);
  double s_t = 1.0 + std::exp(-2.0 * t);
  for (double x : {-4.0, -1.5, 0.0, 0.7, 3.0}) {
    CAPTURE(x);
    CHECK(st.density.lebesgue_pdf(x) ==
          Approx(std::exp(gauss_leb_logpdf(x, 0.0, s_t))).margin(1e-6));
  }
  CHECK(std::abs(st.density.mass() - 1.0) <= 1e-8);

  auto tilt = RelativeDensity1D::exponential_tilt(1.0);
  FlowState ts = ou_evolve(tilt, 0.7);
  double b_t = std::exp(-0.7);
  for (double x : {-3.0, 0.0, 1.0, 4.0}) {
    CAPTURE(x);
    CHECK(ts.density.log_f(x) == Approx(b_t * x - 0.5 * b_t * b_t).margin(1e-6));
  }

  FlowState zero = ou_evolve(n02, 0.0);
  for (double x : {-6.0, -1.0, 0.0, 2.0, 6.0})
    CHECK(zero.density.log_f(x) == Approx(n02.log_f(x)).margin(1e-10));

  CHECK_THROWS_AS(ou_evolve(n02, -0.1), parameter_error);
}

TEST_CASE("ou_evolve semigroup property and monotone trace") {
  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);
  FlowState first = ou_evolve(n02, 0.1);
  FlowState composed = ou_evolve(first.density, 0.3);
  FlowState direct = ou_evolve(n02, 0.4);
  for (double x : {-4.0, -2.0, 0.0, 1.0, 3.0}) {
    CAPTURE(x);
    CHECK(composed.density.f(x) == Approx(direct.density.f(x)).margin(1e-6));
  }

  REQUIRE(direct.trace.size() == 2);
  CHECK(direct.trace[1].H <= direct.trace[0].H + 1e-8);
  CHECK(direct.trace[1].I <= direct.trace[0].I + 1e-8);

  double i_t = direct.trace.back().I;
  double closed = std::exp(-4.0 * 0.4) / (1.0 + std::exp(-2.0 * 0.4));
  CHECK(i_t == Approx(closed).margin(1e-7));
}

TEST_CASE("ou_evolve on a grid density") {
  Grid1D g(-10.0, 10.0, 4001);
  std::vector<double> logf(g.count), dlogf(g.count);
  for (int i = 0; i < g.count; ++i) {
    double x = g.node(i);
    logf[i] = -0.5 * std::log(2.0) + 0.25 * x * x;
    dlogf[i] = 0.5 * x;
  }
  auto nu = RelativeDensity1D::from_log_grid(logf, dlogf, g, 1e-7);
  FlowState st = ou_evolve(nu, 0.5);
  double s_t = 1.0 + std::exp(-1.0);
  for (double x : {-3.0, -1.0, 0.0, 2.0})
    CHECK(st.density.lebesgue_pdf(x) ==
          Approx(std::exp(gauss_leb_logpdf(x, 0.0, s_t))).margin(1e-5));
}

TEST_CASE("de Bruijn identity") {
  auto gamma = RelativeDensity1D::standard_gaussian();
  InequalityReport trivial = de_bruijn_check(gamma);
  CHECK(trivial.pass);
  CHECK(std::abs(trivial.lhs) <= 1e-10);

  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);
  InequalityReport r = de_bruijn_check(n02, 8.0, 64);
  CHECK(r.pass);
  CHECK(r.lhs == Approx(0.5 * (1.0 - std::log(2.0))).margin(1e-7));
  CHECK(r.rhs == Approx(0.5 * (1.0 - std::log(2.0))).margin(1e-4));
  CHECK(-r.margin <= 1e-3);

  auto tilt = RelativeDensity1D::exponential_tilt(1.0);
  InequalityReport rt = de_bruijn_check(tilt, 8.0, 64);
  CHECK(rt.pass);
  CHECK(rt.lhs == Approx(0.5).margin(1e-8));
  CHECK(rt.rhs == Approx(0.5).margin(1e-4));

  CHECK_THROWS_AS(de_bruijn_check(n02, 8.0, 16), parameter_error);
  CHECK_THROWS_AS(de_bruijn_check(n02, 0.0, 64), parameter_error);
}

TEST_CASE("fisher decay saturates on the sharp family") {
  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);
  InequalityReport r = fisher_decay_check(n02, 0.5, {0.1, 0.5, 1.0, 2.0});
  CHECK(r.pass);
  CHECK(std::abs(r.margin) <= 1e-6);

  auto gamma = RelativeDensity1D::standard_gaussian();
  InequalityReport g = fisher_decay_check(gamma, 1.0, {0.2, 1.0});
  CHECK(g.pass);
  CHECK(std::abs(g.margin) <= 1e-10);

  InequalityReport strict = fisher_decay_check(cosh_density(0.8), 0.25, {0.25, 1.0});
  CHECK(strict.pass);
  CHECK(strict.margin > 1e-4);

  CHECK_THROWS_AS(fisher_decay_check(RelativeDensity1D::exponential_tilt(1.0), 1.0, {0.5}),
                  parameter_error);
  CHECK_THROWS_AS(fisher_decay_check(n02, 0.0, {0.5}), parameter_error);
  CHECK_THROWS_AS(fisher_decay_check(n02, 0.5, {}), parameter_error);
}

TEST_CASE("fp_evolve: stationary state and gaussian cross-check") {
  auto pot = Potential1D::gaussian();
  auto gamma = RelativeDensity1D::standard_gaussian();
  FlowState still = fp_evolve(pot, gamma, 0.1, 3);
  for (double x : {-3.0, 0.0, 2.0})
    CHECK(still.density.log_f(x) == Approx(0.0).margin(1e-8));
  CHECK(std::abs(still.trace.back().H) <= 1e-10);

  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);
  FlowState fp = fp_evolve(pot, n02, 0.5, 5);
  FlowState ou = ou_evolve(n02, 0.5);
  for (double x : {-4.0, -1.0, 0.0, 1.5, 4.0}) {
    CAPTURE(x);
    CHECK(fp.density.lebesgue_pdf(x) == Approx(ou.density.lebesgue_pdf(x)).margin(2e-4));
  }
  for (size_t k = 1; k < fp.trace.size(); ++k) {
    CHECK(fp.trace[k].H <= fp.trace[k - 1].H + 1e-8);
    CHECK(fp.trace[k].I <= fp.trace[k - 1].I + 1e-8);
  }
}

TEST_CASE("fp_evolve: quartic potential decreases entropy") {
  auto pot = Potential1D::quartic(0.25);
  auto nu = quartic_even_density(0.25);
  FlowState st = fp_evolve(pot, nu, 0.5, 9);
  for (size_t k = 1; k < st.trace.size(); ++k) {
    CAPTURE(k);
    CHECK(st.trace[k].H <= st.trace[k - 1].H + 1e-10);
  }
  CHECK(st.trace.front().H > st.trace.back().H + 1e-4);
  CHECK(std::abs(st.density.mass() - 1.0) <= 2e-5);

  Potential1D double_well{[](double x) { return 0.25 * x * x * x * x - x * x; },
                          [](double x) { return x * x * x - 2.0 * x; },
                          [](double x) { return 3.0 * x * x - 2.0; }, 1.0};
  CHECK_THROWS_AS(fp_evolve(double_well, nu, 0.1), parameter_error);
}

TEST_CASE("be_constant branches and continuity") {
  CHECK(be_constant(1.0, 1.0) == Approx(0.25).margin(1e-15));
  CHECK(be_constant(2.0, 2.0) == Approx(0.125).margin(1e-15));
  CHECK(be_constant(1.0, 0.5) == Approx(0.3068528194400547).margin(1e-12));

  auto direct = [](double eta, double lambda) {
    return (eta - lambda - lambda * (std::log(eta) - std::log(lambda))) /
           (2.0 * (eta - lambda) * (eta - lambda));
  };
  for (auto [eta, lambda] : std::vector<std::pair<double, double>>{
           {2.0, 0.7}, {0.5, 1.5}, {3.0, 0.2}, {1.0, 4.0}}) {
    CAPTURE(eta, lambda);
    CHECK(be_constant(eta, lambda) == Approx(direct(eta, lambda)).margin(1e-13));
  }
  CHECK(be_constant(1.0, 1.0 + 1e-9) == Approx(0.25).margin(1e-9));
  CHECK(be_constant(3.0, 3.0 * (1.0 + 1e-10)) == Approx(1.0 / 12.0).margin(1e-10));
  CHECK_THROWS_AS(be_constant(0.0, 1.0), parameter_error);
  CHECK_THROWS_AS(be_constant(1.0, -1.0), parameter_error);
}

TEST_CASE("be_check: sharp gaussian case and quartic margin") {
  auto pot = Potential1D::gaussian();
  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);
  InequalityReport r = be_check(pot, 1.0, n02, 0.5);
  CHECK(r.pass);
  CHECK(std::abs(r.margin) <= 1e-5);
  double entropy_margin = 0.0;
  for (const auto& kv : r.params)
    if (kv.first == "entropy_margin") entropy_margin = kv.second;
  CHECK(std::abs(entropy_margin) <= 1e-6);

  auto gamma = RelativeDensity1D::standard_gaussian();
  InequalityReport g = be_check(pot, 1.0, gamma, 1.0);
  CHECK(g.pass);
  CHECK(std::abs(g.margin) <= 1e-10);

  auto quartic = Potential1D::quartic(0.25);
  auto nu = quartic_even_density(0.25);
  InequalityReport q = be_check(quartic, 1.0, nu, 1.0, {0.25, 0.5});
  CHECK(q.pass);
  CHECK(q.margin > 1e-4);

  CHECK_THROWS_AS(be_check(pot, 1.0, RelativeDensity1D::exponential_tilt(0.5), 1.0),
                  parameter_error);
  Potential1D skew{[](double x) { return 0.5 * x * x + 0.05 * x * x * x; },
                   [](double x) { return x + 0.15 * x * x; },
                   [](double x) { return 1.0 + 0.3 * x; }, 1.0};
  CHECK_THROWS_AS(be_check(skew, 1.0, n02, 0.5), parameter_error);
}
