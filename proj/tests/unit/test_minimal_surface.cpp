#include <doctest.h>

#include <cmath>

#include "mcf/errors.hpp"
#include "mcf/geometry.hpp"
#include "mcf/minimal_surface.hpp"
#include "mcf/params.hpp"

using namespace mcf;

TEST_CASE("axis series") {
  const auto c = axis_series(4, 1.0, 3);
  CHECK(c[1] == doctest::Approx(3.0 / 8).epsilon(1e-14));
  const double a = c[1];
  const double expected = (8 * a * a * a - 3 * a) / (4 * 6);
  CHECK(c[2] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("profile near the axis and in the tail (n=4, b=1)") {
  const auto mp = integrate_profile(4, 1.0, 100.0, 1e-10);
  CHECK(mp.q[0] == 1.0);
  CHECK(mp.q1[0] == 0.0);
  CHECK(std::abs(mp.jet_at(0.1).q - 1.00375) < 1e-4);
  for (std::size_t i = 1; i < mp.size(); ++i) {
    CHECK(mp.q1[i] > 0);
    CHECK(mp.q1[i] < 1);
    CHECK(mp.q2[i] > 0);
    CHECK(mp.w[i] > 0);
  }
  CHECK(mp.q1.back() > 0.999);
  const double w40 = mp.w_at(40.0);
  CHECK(w40 > 0);
  CHECK(w40 < 0.01);
  const auto half = integrate_profile(4, 1.0, 100.0, 1e-12);
  CHECK(std::abs(half.w_at(40.0) - w40) < 1e-8);
}

TEST_CASE("tail fit") {
  const auto mp = integrate_profile(4, 1.0, 100.0, 1e-10);
  const auto tf = fit_tail(mp, 20.0, 80.0);
  CHECK(tf.alpha_fit == doctest::Approx(-2.0).epsilon(0.05));
  CHECK(std::abs(tf.alpha_fit + 2.0) < 0.1);
  CHECK(tf.C_b > 0);
  const auto mp5 = integrate_profile(5, 1.0, 100.0, 1e-10);
  CHECK(std::abs(fit_tail(mp5, 20.0, 80.0).alpha_fit - derive_constants(5, 2).alpha) < 0.07);
  const auto mp2 = integrate_profile(4, 2.0, 200.0, 1e-10);
  CHECK(mp2.C_b == doctest::Approx(8.0 * mp.C_b).epsilon(0.02));
  CHECK_THROWS_AS(fit_tail(mp, 20.0, 500.0), Error);
}

TEST_CASE("scaling law") {
  const auto mp1 = integrate_profile(4, 1.0, 400.0, 1e-9);
  CHECK(verify_scaling(mp1, mp1) == 0.0);
  // Same setup in units of b: identical steps, roundoff-level deviation.
  CHECK(verify_scaling(mp1, integrate_profile(4, 2.0, 800.0, 1e-9)) <= 1e-12);
  // Shifted seed and grid decouple the step sequences.
  MinimalOptions o;
  o.seed_fraction = 0.7e-2;
  o.r_first = 1.3e-3;
  for (double b : {0.5, 1.7, 2.0}) {
    const double d = verify_scaling(mp1, integrate_profile(4, b, 400.0 * b, 1e-9, o));
    CHECK(d > 1e-14);
    CHECK(d <= 1e-7);
  }
}

TEST_CASE("defect shrinks with the tolerance") {
  const auto a = integrate_profile(4, 1.0, 100.0, 1e-8);
  const auto b = integrate_profile(4, 1.0, 100.0, 1e-9);
  CHECK(a.ode_residual / b.ode_residual >= 4.0);
}

TEST_CASE("matrix of (n, b): convexity, slope, positivity, minimality") {
  for (int n : {4, 5, 7}) {
    for (double b : {0.5, 1.0, 2.0}) {
      const auto mp = integrate_profile(n, b, 100.0 * b, 1e-10);
      const auto u = u0_profile(mp);
      CHECK(u[0] == doctest::Approx(b).epsilon(1e-14));
      double worst_h = 0;
      for (std::size_t i = 1; i < mp.size(); ++i) {
        CHECK(mp.q2[i] > 0);
        CHECK(mp.q1[i] > 0);
        CHECK(mp.q1[i] < 1);
        CHECK(u[i] > 0);
        CHECK(u[i] < u[i - 1]);
        if (mp.grid[i] >= 2 * b) CHECK(mp.w[i] < mp.w[i - 1]);
        const auto c = curvature(n, mp.jet(i));
        worst_h = std::max(worst_h, std::abs(c.H) / (1 + c.A2));
      }
      CHECK(worst_h < 1e-8);
      CHECK(mp.alpha_fit == doctest::Approx(derive_constants(n, 2).alpha).epsilon(0.05));
    }
  }
}

TEST_CASE("u0 tail and laplacian identity") {
  const auto mp = integrate_profile(4, 1.0, 200.0, 1e-10);
  const auto t = fit_u0_tail(mp, 20.0, 160.0);
  CHECK(t.exponent == doctest::Approx(-2.0).epsilon(0.05));
  CHECK(t.coefficient == doctest::Approx(3.0 / std::sqrt(2.0) * mp.C_b).epsilon(0.1));
  double worst = 0;
  for (std::size_t i = 1; i < mp.size() && mp.grid[i] <= 20; ++i) {
    const auto j = mp.jet(i);
    const auto u = u0_jet(mp, j.r);
    const double res = laplace_beltrami_radial(4, j, u) + curvature(4, j).A2 * u.u;
    worst = std::max(worst, std::abs(res));
    CHECK(std::abs(laplace_beltrami_radial(4, j, u) - laplace_beltrami_minimal(4, j, u)) < 1e-8);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("Sigma-bar distance equivalence and weighted norms") {
  const auto mp = integrate_profile(4, 1.0, 100.0, 1e-10);
  CHECK(distance_equivalence(mp.grid, mp.q).max_ratio_violation <= 0.0);
  const auto u = u0_profile(mp);
  const double v2 = weighted_sup_norm(mp.grid, u, 2.0).value;
  CHECK(std::isfinite(v2));
  const auto big = integrate_profile(4, 1.0, 1000.0, 1e-10);
  const auto ub = u0_profile(big);
  const double v2b = weighted_sup_norm(big.grid, ub, 2.0).value;
  CHECK(v2b < 1.2 * v2);
  CHECK(weighted_sup_norm(big.grid, ub, 2.5).value > 2.0 * weighted_sup_norm(mp.grid, u, 2.5).value);
}

TEST_CASE("precondition errors") {
  CHECK_THROWS_AS(integrate_profile(4, 1.0, 10.0, 1e-10), Error);
  CHECK_THROWS_AS(integrate_profile(4, -1.0, 100.0, 1e-10), Error);
  CHECK_THROWS_AS(integrate_profile(4, 1.0, 100.0, 1e-3), Error);
}
