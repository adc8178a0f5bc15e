#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "mcf/cone_heat.hpp"
#include "mcf/errors.hpp"
#include "mcf/numerics/grid.hpp"
#include "mcf/numerics/quadrature.hpp"
#include "mcf/params.hpp"

using namespace mcf;

TEST_CASE("bessel I_1/2 matches the closed form") {
  CHECK(bessel_I(0.5, 0.0, false) == 0.0);
  CHECK(bessel_I(0.5, 1.0, false) == doctest::Approx(std::sqrt(2 / std::numbers::pi) * std::sinh(1.0)).epsilon(1e-12));
  double worst = 0.0;
  for (double z : uniform_grid(1e-3, 700, 7001)) {
    const double exact = -std::expm1(-2 * z) / 2 * std::sqrt(2 / (std::numbers::pi * z));
    worst = std::max(worst, std::abs(bessel_I(0.5, z, true) / exact - 1));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("bessel regimes agree and match an independent implementation") {
  for (double mu : {0.5, std::sqrt(4.25), std::sqrt(18.25), 7.4, 20.0}) {
    for (double z : {0.01, 0.7, 3.0, 14.9, 15.1, 40.0, 300.0, 690.0}) {
      const double ref = boost::math::cyl_bessel_i(mu, z);
      if (ref < 1e-300) continue;
      CHECK(bessel_I(mu, z, false) == doctest::Approx(ref).epsilon(1e-10));
    }
    for (double z : {20.0, 30.0, 60.0}) {
      if (mu > 5) continue;  // Hankel expansion not accurate for mu^2 >> z
      CHECK(bessel_I_scaled_asymptotic(mu, z) == doctest::Approx(bessel_I_scaled_series(mu, z)).epsilon(1e-10));
    }
  }
  const double z = 1e4;
  CHECK(bessel_I(2.0, z, true) == doctest::Approx(1 / std::sqrt(2 * std::numbers::pi * z)).epsilon(0.01));
  CHECK(bessel_I(3.0, 0.0, true) == 0.0);
}

TEST_CASE("heat kernel is positive and symmetric") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lr(-3, 3);
  for (int i = 0; i < 1000; ++i) {
    const double mu = 0.5 + 5 * std::exp(lr(rng)) / 20, t = std::exp(lr(rng));
    const double r = std::exp(lr(rng)), rho = std::exp(lr(rng));
    const double a = heat_kernel(mu, t, r, rho), b = heat_kernel(mu, t, rho, r);
    CHECK(a >= 0);
    CHECK(std::abs(a - b) <= 1e-13 * std::max(a, 1e-300));
  }
  CHECK(std::isfinite(heat_kernel(0.5, 1e-3, 1e3, 1e3)));
}

TEST_CASE("stationary monomial is preserved") {
  const double mu = 0.5;
  auto v0 = [mu](double rho) { return std::pow(rho, mu + 0.5); };
  const std::vector<double> radii{0.01, 0.3, 2.0, 10.0, 100.0};
  for (double t : {0.1, 1.0, 10.0}) {
    const auto v = propagate(mu, t, v0, mu + 0.5, radii);
    for (std::size_t i = 0; i < radii.size(); ++i)
      CHECK(std::abs(v[i] / v0(radii[i]) - 1) <= 1e-6);
  }
  const double mu5 = derive_constants(5, 2).mu;
  const auto v = propagate(mu5, 1.0, [mu5](double rho) { return std::pow(rho, mu5 + 0.5); }, mu5 + 0.5, {2.0});
  CHECK(v[0] == doctest::Approx(std::pow(2.0, mu5 + 0.5)).epsilon(1e-6));
}

TEST_CASE("semigroup identity") {
  const double mu = 0.5, r = 1, rho = 2, s = 0.3, t = 0.7;
  auto f = [&](double sig) { return heat_kernel(mu, s, r, sig) * heat_kernel(mu, t, sig, rho); };
  const double lhs = integrate(f, 0.0, 30.0, 1e-12).value;
  CHECK(std::abs(lhs - heat_kernel(mu, s + t, r, rho)) <= 1e-5 * heat_kernel(mu, s + t, r, rho));
}

TEST_CASE("truncation remainder is negligible") {
  for (double t : {0.1, 1.0, 100.0})
    for (double r : {0.01, 1.0, 1e3}) CHECK(truncation_bound(0.5, t, r, 1.0, 1.0) <= 1e-12 * std::max(r, 1e-2));
}

TEST_CASE("propagation of fields") {
  const double mu = 0.5;
  const auto grid = geometric_grid(1e-2, 1e2, 20);
  std::vector<double> zero(grid.size(), 0.0);
  const auto z = propagate(mu, 1.0, make_field(grid, zero));
  for (double x : z.v) CHECK(x == 0.0);

  std::vector<double> mono(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) mono[i] = grid[i];
  const auto f = make_field(grid, mono);
  CHECK(f.tail_exponent == doctest::Approx(1.0).epsilon(1e-8));
  const auto g = propagate(mu, 1.0, f);
  double worst = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(g.v[i] / grid[i] - 1));
  CHECK(worst <= 1e-6);
  CHECK(g.tail_exponent <= f.tail_exponent);
  CHECK(g.t == 1.0);

  std::vector<double> fat(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) fat[i] = grid[i] * grid[i];
  CHECK_THROWS_AS(propagate(mu, 1.0, make_field(grid, fat)), Error);

  // Gaussian-damped subcritical data: sup ratio decreases in t.
  const double delta = 0.5;
  std::vector<double> damped(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    damped[i] = std::pow(grid[i], mu + 0.5 - delta) * std::exp(-grid[i] * grid[i]);
  auto v0 = [&](double rho) { return std::pow(rho, mu + 0.5 - delta) * std::exp(-rho * rho); };
  double prev = 1e300;
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const auto v = propagate(mu, t, v0, -10.0, grid);
    double sup = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) sup = std::max(sup, v[i] / grid[i]);
    CHECK(sup < prev);
    prev = sup;
  }
}

TEST_CASE("decay experiment slopes") {
  const auto times = geometric_grid(1.0, 100.0, 4);
  struct Case {
    int n;
    double delta, tol;
  };
  for (Case c : {Case{4, 1.0, 0.075}, Case{5, 2.0, 0.15}, Case{4, 0.1, 0.02}}) {
    const auto ex = decay_experiment(derive_constants(c.n, 2), c.delta, times);
    CAPTURE(c.n);
    CAPTURE(c.delta);
    CHECK(std::abs(ex.fit.exponent + c.delta / 2) <= c.tol);
  }
  CHECK_THROWS_AS(decay_experiment(derive_constants(4, 2), 0.0, times), Error);
}

TEST_CASE("cone transform") {
  const Params p = derive_constants(4, 2);
  const auto r = geometric_grid(1e-1, 1e2, 10);
  std::vector<double> u(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) u[i] = std::pow(r[i], p.alpha);
  const auto v = cone_transform(4, r, u, 3.0);
  CHECK(v.t == 1.5);
  for (std::size_t i = 0; i < r.size(); ++i)
    CHECK(v.v[i] == doctest::Approx(std::pow(r[i], p.mu + 0.5)).epsilon(1e-12));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (auto& x : u) x = nd(rng);
  double t_back = 0;
  const auto back = cone_transform_inverse(4, cone_transform(4, r, u, 0.8), t_back);
  CHECK(t_back == 0.8);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-14));
}

TEST_CASE("bessel shape constant is finite") {
  for (double mu : {0.5, 2.0, 4.27}) {
    const double c = bessel_bound_constant(mu);
    CHECK(std::isfinite(c));
    CHECK(c >= 1 / std::sqrt(2 * std::numbers::pi) * 0.99);
  }
}

TEST_CASE("u-side decay through the cone transform") {
  const Params p = derive_constants(4, 2);
  const double delta = 0.5;
  const auto r = geometric_grid(1e-2, 1e3, 20);
  std::vector<double> u(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) u[i] = std::pow(r[i], p.alpha - delta);
  const HalfLineField v0 = cone_transform(4, r, u, 0.0);
  double prev = 1e300;
  for (double tu : {1.0, 4.0, 16.0, 64.0}) {
    double t_back = 0;
    const auto ut = cone_transform_inverse(4, propagate(p.mu, tu / 2, v0), t_back);
    CHECK(t_back == doctest::Approx(tu));
    double sup = 0;
    for (std::size_t i = 0; i < r.size(); ++i) sup = std::max(sup, std::pow(r[i], -p.alpha) * std::abs(ut[i]));
    CHECK(sup < prev);
    prev = sup;
  }
}
