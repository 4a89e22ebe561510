#include <catch_amalgamated.hpp>

#include <random>

#include "funcineq/transport.hpp"
#include "oracle.hpp"

using namespace funcineq;
using Catch::Approx;

namespace {

RelativeDensity1D grid_gaussian(double m, double s, double lo = -10.0, double hi = 10.0,
                                int count = 4001) {
  Grid1D g(lo, hi, count);
  std::vector<double> logf(g.count), dlogf(g.count);
  for (int i = 0; i < g.count; ++i) {
    double x = g.node(i);
    logf[i] = -0.5 * std::log(s) + 0.5 * x * x - 0.5 * (x - m) * (x - m) / s;
    dlogf[i] = x - (x - m) / s;
  }
  return RelativeDensity1D::from_log_grid(logf, dlogf, g, 1e-7);
}

double w2_gauss(double m1, double s1, double m2, double s2) {
  double dm = m1 - m2, ds = std::sqrt(s1) - std::sqrt(s2);
  return std::sqrt(dm * dm + ds * ds);
}

double sorted_match_cost(std::vector<double> a, std::vector<double> b, DiscreteCost cost) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    total += (cost == DiscreteCost::l1) ? std::abs(d) : d * d;
  }
  return total;
}

}  // namespace

TEST_CASE("phi and tilde_phi basics") {
  CHECK(phi(0.0) == 0.0);
  CHECK(phi(1.0) == Approx(1.0 - std::log(2.0)).margin(1e-15));
  CHECK(phi(-0.5) == Approx(-0.5 + std::log(2.0)).margin(1e-15));
  CHECK_THROWS_AS(phi(-1.0), parameter_error);
  CHECK_THROWS_AS(phi(std::numeric_limits<double>::quiet_NaN()), parameter_error);

  CHECK(tilde_phi(0.0) == 0.0);
  CHECK(tilde_phi(0.6) == Approx(0.06).margin(1e-15));
  CHECK(tilde_phi(-0.6) == tilde_phi(0.6));
  CHECK(tilde_phi(1.0) == Approx(1.0 / 6.0).margin(1e-15));
  CHECK(tilde_phi(1.0 + 1e-9) == Approx(1.0 / 6.0).margin(1e-8));
  CHECK(tilde_phi(3.0) == Approx(phi(3.0) - 5.0 / 6.0 + std::log(2.0)).margin(1e-15));
  CHECK(tilde_phi(-3.0) == tilde_phi(3.0));
}

TEST_CASE("phi dominates tilde_phi / 10") {
  for (double t = -0.999; t <= 10.0; t += 0.007) {
    CAPTURE(t);
    CHECK(phi(t) >= tilde_phi(t) / 10.0 - 1e-13);
  }
}

TEST_CASE("tilde_phi_inv round trips and matches bisection") {
  for (double y : {0.0, 1e-6, 0.01, 1.0 / 6.0, 0.2, 1.0, 4.0, 10.0, 50.0}) {
    CAPTURE(y);
    double t = tilde_phi_inv(y);
    CHECK(t >= 0.0);
    CHECK(tilde_phi(t) == Approx(y).margin(1e-11 * (1.0 + y)));
    if (y > 1.0 / 6.0) {
      double ref = find_root([&](double v) { return tilde_phi(v) - y; }, 1.0, 200.0, 1e-13);
      CHECK(t == Approx(ref).margin(1e-9));
    }
  }
  CHECK_THROWS_AS(tilde_phi_inv(-0.1), parameter_error);
}

TEST_CASE("monotone map between gaussians is the affine map") {
  auto nu = RelativeDensity1D::gaussian_relative(0.0, 2.0);
  auto gamma = RelativeDensity1D::standard_gaussian();
  TransportMap1D map = monotone_map(nu, gamma);
  REQUIRE(map.table_p.size() == 4001);
  REQUIRE(std::is_sorted(map.table_t.begin(), map.table_t.end()));
  const double r = 1.0 / std::sqrt(2.0);
  for (double x : {-8.0, -3.0, -1.0, -0.25, 0.0, 0.4, 1.0, 2.5, 5.0, 8.0}) {
    CAPTURE(x);
    CHECK(map(x) == Approx(r * x).margin(1e-8));
    CHECK(map.derivative(x) == Approx(r).margin(1e-9));
  }

  auto shifted = RelativeDensity1D::gaussian_relative(1.0, 1.0);
  TransportMap1D map2 = monotone_map(shifted, gamma);
  for (double x : {-4.0, 0.0, 1.0, 3.0, 6.0})
    CHECK(map2(x) == Approx(x - 1.0).margin(1e-8));

  CHECK_THROWS_AS(monotone_map(nu, gamma, 8), parameter_error);
}

TEST_CASE("monotone map from a grid density") {
  auto nu = grid_gaussian(0.0, 2.0);
  auto gamma = RelativeDensity1D::standard_gaussian();
  TransportMap1D map = monotone_map(nu, gamma);
  const double r = 1.0 / std::sqrt(2.0);
  for (double x : {-5.0, -2.0, -0.5, 0.0, 1.0, 3.0, 5.0}) {
    CAPTURE(x);
    CHECK(map(x) == Approx(r * x).margin(1e-6));
    CHECK(map.derivative(x) == Approx(r).margin(1e-5));
  }
}

TEST_CASE("w2 matches the gaussian closed form") {
  auto gamma = RelativeDensity1D::standard_gaussian();
  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);

  FunctionalValue w = w2_1d(n02, gamma);
  CHECK(w.value == Approx(std::sqrt(2.0) - 1.0).margin(1e-8));
  CHECK(std::abs(w.value - (std::sqrt(2.0) - 1.0)) <= w.est_error + 1e-11);

  FunctionalValue wr = w2_1d(gamma, n02);
  CHECK(wr.value == Approx(w.value).margin(1e-7));

  CHECK(w2_1d(RelativeDensity1D::gaussian_relative(1.0, 1.0), gamma).value ==
        Approx(1.0).margin(1e-9));
  CHECK(w2_1d(RelativeDensity1D::gaussian_relative(0.7, 2.5),
              RelativeDensity1D::gaussian_relative(-0.3, 0.49))
            .value == Approx(w2_gauss(0.7, 2.5, -0.3, 0.49)).margin(1e-7));
  CHECK(w2_1d(RelativeDensity1D::exponential_tilt(1.3), gamma).value ==
        Approx(1.3).margin(1e-8));
}

TEST_CASE("w2 on a grid density") {
  auto nu = grid_gaussian(0.0, 2.0);
  auto gamma = RelativeDensity1D::standard_gaussian();
  CHECK(w2_1d(nu, gamma).value == Approx(std::sqrt(2.0) - 1.0).margin(1e-6));
}

TEST_CASE("w1 matches closed forms") {
  auto gamma = RelativeDensity1D::standard_gaussian();
  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);

  double closed = (std::sqrt(2.0) - 1.0) * std::sqrt(2.0 / pi);
  FunctionalValue w = w1_1d(n02, gamma);
  CHECK(w.value == Approx(closed).margin(1e-6));

  FunctionalValue wr = w1_1d(gamma, n02);
  CHECK(wr.value == Approx(w.value).margin(1e-10));

  CHECK(w1_1d(RelativeDensity1D::gaussian_relative(1.0, 1.0), gamma).value ==
        Approx(1.0).margin(1e-6));
  CHECK(w1_1d(RelativeDensity1D::exponential_tilt(0.8), gamma).value ==
        Approx(0.8).margin(1e-6));
  CHECK(w1_1d(grid_gaussian(0.0, 2.0), gamma).value == Approx(closed).margin(1e-5));

  FunctionalValue w2 = w2_1d(n02, gamma);
  CHECK(w.value <= w2.value + 1e-9);
}

TEST_CASE("w11 on products adds coordinates") {
  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);
  ProductDensity nu({n02, n02});
  ProductDensity gamma2 = standard_gaussian_product(2);
  double single = w1_1d(n02, RelativeDensity1D::standard_gaussian()).value;
  CHECK(w11_product(nu, gamma2).value == Approx(2.0 * single).margin(1e-10));
  ProductDensity gamma3 = standard_gaussian_product(3);
  CHECK_THROWS_AS(w11_product(nu, gamma3), parameter_error);
}

TEST_CASE("talagrand deficit values") {
  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);
  FunctionalValue d = tal_deficit(n02);
  CHECK(d.value == Approx(2.0 * std::sqrt(2.0) - 2.0 - std::log(2.0)).margin(1e-7));
  CHECK(d.value == Approx(0.1352799441862450).margin(1e-7));

  CHECK(tal_deficit(RelativeDensity1D::exponential_tilt(1.3)).value ==
        Approx(0.0).margin(1e-7));

  for (double s : {0.5, 0.8, 1.5, 3.0}) {
    CAPTURE(s);
    CHECK(tal_deficit(RelativeDensity1D::gaussian_relative(0.0, s)).value >= -1e-9);
  }

  ProductDensity pair({n02, n02});
  CHECK(tal_deficit(pair).value == Approx(2.0 * d.value).margin(1e-6));
}

TEST_CASE("talagrand lower bound formula") {
  CHECK(tal_lower_bound(100.0, 1) == Approx(100.0 / 288.0).margin(1e-15));
  CHECK(tal_lower_bound(0.5, 4) == Approx(0.0625 / 288.0).margin(1e-15));
  CHECK(tal_lower_bound(4.0, 1) == Approx(4.0 / 288.0).margin(1e-15));
  CHECK(tal_lower_bound(1.0, 1, 0.5) == Approx(0.5).margin(1e-15));
  CHECK_THROWS_AS(tal_lower_bound(-1.0, 1), parameter_error);
  CHECK_THROWS_AS(tal_lower_bound(1.0, 0), parameter_error);
  CHECK_THROWS_AS(tal_lower_bound(1.0, 1, 0.0), parameter_error);

  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);
  auto gamma = RelativeDensity1D::standard_gaussian();
  double w11 = w1_1d(n02, gamma).value;
  CHECK(tal_deficit(n02).value >= tal_lower_bound(w11, 1) - 1e-9);
}

TEST_CASE("transport gaps on the scaled gaussian") {
  auto n02 = RelativeDensity1D::gaussian_relative(0.0, 2.0);
  double delta = lsi_deficit(n02).value;

  FunctionalValue quad = cordero_gap_quadratic(n02);
  double quad_closed = 0.5 * (std::sqrt(2.0) - 1.0) * (std::sqrt(2.0) - 1.0);
  CHECK(quad.value == Approx(quad_closed).margin(1e-9));
  CHECK(2.0 * delta >= quad.value - 1e-9);

  FunctionalValue lg = cordero_gap_log(n02);
  double lg_closed = 1.0 / std::sqrt(2.0) - 1.0 + 0.5 * std::log(2.0);
  CHECK(lg.value == Approx(lg_closed).margin(1e-9));
  CHECK(delta >= lg.value - 1e-9);

  FunctionalValue l1 = cordero_t_prime_l1(n02);
  CHECK(l1.value == Approx(1.0 - 1.0 / std::sqrt(2.0)).margin(1e-9));
  double chain = tilde_phi(l1.value) / 10.0;
  CHECK(chain == Approx(0.0014297739).margin(1e-8));
  CHECK(delta >= chain - 1e-12);
  CHECK(lg.value >= chain - 1e-12);
}

TEST_CASE("transport gaps vanish on tilts and agree on grids") {
  auto tilt = RelativeDensity1D::exponential_tilt(1.1);
  CHECK(cordero_gap_quadratic(tilt).value == Approx(0.0).margin(1e-10));
  CHECK(cordero_gap_log(tilt).value == Approx(0.0).margin(1e-10));
  CHECK(cordero_t_prime_l1(tilt).value == Approx(0.0).margin(1e-6));

  auto grid = grid_gaussian(0.0, 2.0);
  double quad_closed = 0.5 * (std::sqrt(2.0) - 1.0) * (std::sqrt(2.0) - 1.0);
  CHECK(cordero_gap_quadratic(grid).value == Approx(quad_closed).margin(1e-5));
  double lg_closed = 1.0 / std::sqrt(2.0) - 1.0 + 0.5 * std::log(2.0);
  CHECK(cordero_gap_log(grid).value == Approx(lg_closed).margin(1e-5));
}

TEST_CASE("discrete transport oracle on hand cases") {
  DiscreteMeasure a({{0.0}, {1.0}}), b({{2.0}, {3.0}});
  CHECK(discrete_ot_oracle(a, b, DiscreteCost::l1) == Approx(4.0).margin(1e-14));

  DiscreteMeasure c({{0.0}, {3.0}}), d({{1.0}, {2.0}});
  CHECK(discrete_ot_oracle(c, d, DiscreteCost::l2_squared) == Approx(2.0).margin(1e-14));

  DiscreteMeasure one_a(std::vector<std::vector<double>>{{0.0}});
  DiscreteMeasure one_b(std::vector<std::vector<double>>{{2.0}});
  CHECK(discrete_ot_oracle(one_a, one_b, DiscreteCost::l1) == Approx(2.0).margin(1e-15));
  CHECK(discrete_ot_oracle(one_a, one_b, DiscreteCost::l2_squared) == Approx(4.0).margin(1e-15));

  DiscreteMeasure p({{0.0, 0.0}, {1.0, 0.0}}), q({{0.0, 1.0}, {1.0, 1.0}});
  CHECK(discrete_ot_oracle(p, q, DiscreteCost::l1) == Approx(2.0).margin(1e-14));
  CHECK(discrete_ot_oracle(p, q, DiscreteCost::l2_squared) == Approx(2.0).margin(1e-14));

  CHECK_THROWS_AS(discrete_ot_oracle(a, one_b, DiscreteCost::l1), parameter_error);
  CHECK_THROWS_AS(discrete_ot_oracle(a, q, DiscreteCost::l1), parameter_error);
  CHECK_THROWS_AS(DiscreteMeasure(std::vector<std::vector<double>>{}), parameter_error);
  CHECK_THROWS_AS(DiscreteMeasure(std::vector<std::vector<double>>(9, {0.0})),
                  parameter_error);
  CHECK_THROWS_AS(DiscreteMeasure({{0.0}, {0.0, 1.0}}), parameter_error);
}

TEST_CASE("discrete oracle agrees with sorted matching in 1d") {
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 6;
    std::vector<double> xs(k), ys(k);
    std::vector<std::vector<double>> ax(k), ay(k);
    for (int i = 0; i < k; ++i) {
      xs[i] = unif(rng);
      ys[i] = unif(rng);
      ax[i] = {xs[i]};
      ay[i] = {ys[i]};
    }
    DiscreteMeasure a(ax), b(ay);
    CAPTURE(trial);
    CHECK(discrete_ot_oracle(a, b, DiscreteCost::l1) ==
          Approx(sorted_match_cost(xs, ys, DiscreteCost::l1)).margin(1e-12));
    CHECK(discrete_ot_oracle(a, b, DiscreteCost::l2_squared) ==
          Approx(sorted_match_cost(xs, ys, DiscreteCost::l2_squared)).margin(1e-12));
  }
}

TEST_CASE("discrete oracle is invariant under atom reordering") {
  std::vector<std::vector<double>> ax{{0.3, -1.0}, {2.0, 0.5}, {-0.7, 1.1}};
  std::vector<std::vector<double>> ay{{1.0, 0.0}, {-2.0, 0.4}, {0.1, -0.9}};
  DiscreteMeasure a(ax), b(ay);
  double base = discrete_ot_oracle(a, b, DiscreteCost::l2_squared);
  std::rotate(ax.begin(), ax.begin() + 1, ax.end());
  std::swap(ay[0], ay[2]);
  CHECK(discrete_ot_oracle(DiscreteMeasure(ax), DiscreteMeasure(ay),
                           DiscreteCost::l2_squared) == Approx(base).margin(1e-14));
}
