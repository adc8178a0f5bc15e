#include <doctest.h>

#include <cmath>
#include <random>

#include "mcf/barriers.hpp"
#include "mcf/errors.hpp"
#include "mcf/flow.hpp"
#include "mcf/minimal_surface.hpp"
#include "mcf/numerics/grid.hpp"
#include "mcf/params.hpp"

using namespace mcf;

TEST_CASE("supersolution constants") {
  CHECK(supersolution(derive_constants(4, 2), 1.0).C1 == doctest::Approx(11.0).epsilon(1e-14));
  CHECK(supersolution(derive_constants(4, 4), 2.0).C1 == doctest::Approx(102.0).epsilon(1e-14));
  for (int n : {4, 5, 7})
    for (int k : {2, 3, 4}) {
      const Params p = derive_constants(n, k);
      const double l = p.lambda_k;
      const double bracket = (2 * l + 1) * (2 * l) + (n - 1) * (2 * l + 1) + (n - 1);
      for (double C0 : {0.1, 1.0, 7.0}) CHECK(supersolution(p, C0).C1 / C0 == doctest::Approx(bracket).epsilon(1e-15));
    }
  const Params p = derive_constants(4, 2, 1.0);
  CHECK(supersolution(p, 1.0).positivity_radius(0.99) == doctest::Approx(std::sqrt(0.11)).epsilon(1e-12));
  CHECK_THROWS_AS(supersolution(p, 0.0), Error);
}

TEST_CASE("supersolution residual is nonnegative under the coefficient sweep") {
  for (int n : {4, 5, 7})
    for (int k : {2, 3, 4}) {
      const auto s = supersolution(derive_constants(n, k), 1.0);
      const auto samples = sample_validity_region(s, 1.0, 10000, 42 + n * 10 + k);
      const auto rep = supersolution_residual(s, 2.0, samples);
      CAPTURE(n);
      CAPTURE(k);
      CHECK(rep.evaluated == 20000);
      CHECK(rep.min_residual >= -1e-12);
    }
  const auto s = supersolution(derive_constants(4, 2), 1.0);
  // At lambda = 1/2 the (2l-1)(2l-2) contribution vanishes: residual at a = 1 is C1 (T-t) (n-1) r^{-2}.
  CHECK(supersolution_residual_at(s, 2.0, 0.5, 1.0) == doctest::Approx(11 * 0.5 * 3 / 4.0).epsilon(1e-13));
  const auto s3 = supersolution(derive_constants(4, 2), 3.0);
  CHECK(supersolution_residual_at(s3, 2.0, 0.5, 0.3) ==
        doctest::Approx(3 * supersolution_residual_at(s, 2.0, 0.5, 0.3)).epsilon(1e-13));
  const std::vector<SpaceTimeSample> bad{{0.1, 0.5}};
  CHECK_THROWS_AS(supersolution_residual(s, 2.0, bad), Error);
  CHECK_THROWS_AS(supersolution_residual(s, 0.5, {}), Error);
}

TEST_CASE("gamma threshold") {
  for (int n : {4, 5, 7})
    for (int k : {2, 3, 4}) {
      const auto s = supersolution(derive_constants(n, k), 2.0);
      const double Cbar = 1.0, g = gamma_threshold(s, Cbar);
      const auto ok = gamma_threshold_check(s, Cbar, g * 1.0001, 2000, 9);
      CHECK(ok.hypothesis);
      CHECK(ok.violations == 0);
      CHECK(ok.min_margin >= -1e-12);
      const auto bad = gamma_threshold_check(s, Cbar, g * 0.9, 2000, 9);
      CHECK_FALSE(bad.hypothesis);
      CHECK(bad.violations > 0);
    }
  CHECK(std::isinf(gamma_threshold(supersolution(derive_constants(4, 2), 1.0), 1.0)));
}

TEST_CASE("convexity reduction") {
  const std::vector<double> zero{0.0}, one{1.0};
  CHECK(convexity_reduction_check(zero, one).min_direct == 0.0);
  CHECK(convexity_reduction_check(one, one).min_direct == doctest::Approx(0.5));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<double> v, r;
  for (int i = 0; i < 100000; ++i) {
    r.push_back(0.01 + 10 * U(rng));
    v.push_back(r.back() * 1e3 * U(rng));
  }
  const auto rep = convexity_reduction_check(v, r);
  CHECK(rep.holds);
  CHECK(rep.count == 100000);
  CHECK(rep.min_closed >= 0);
  const std::vector<double> neg{-1.0};
  CHECK_THROWS_AS(convexity_reduction_check(neg, one), Error);
}

TEST_CASE("gradient bound on the cone and above it") {
  const OverlapWindow w{2.0, 4.0, 1.0};
  EvolveOptions opt;
  for (int i = 1; i < 50; ++i) opt.snapshot_times.push_back(0.02 * i);
  const auto cone = evolve(cone_state(uniform_grid(0.05, 6, 400)), 4, 0.99, {}, opt);
  const auto rc = gradient_bound_check(cone.snapshots, w);
  CHECK(rc.interior_max == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rc.boundary_max == doctest::Approx(1.0).epsilon(1e-9));

  ProfileState s;
  s.grid = uniform_grid(0, 6, 1200);
  for (double r : s.grid) s.Q.push_back(std::sqrt(r * r + 0.25));
  s.right = Boundary::pinned(s.Q.back());
  const auto hyp = evolve(s, 4, 0.99, {}, opt);
  const auto rh = gradient_bound_check(hyp.snapshots, w);
  CHECK(rh.min_Q_minus_r > 0);
  CHECK(rh.interior_max <= rh.boundary_max + 1e-6);
  CHECK(rh.slices == hyp.snapshots.size());

  const auto cyl = evolve(cylinder_state(4, 1.0, uniform_grid(0, 6, 200)), 4, 0.5, {}, opt);
  try {
    gradient_bound_check(cyl.snapshots, w);
    FAIL("cylinder must fail the cone prerequisite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConePrerequisiteFailed);
  }
}

TEST_CASE("mean curvature chain on the overlap window") {
  const Params p = derive_constants(4, 4);
  const OverlapWindow w{10.0, 20.0, 1.0};
  const double eps = 1e-3, m = 2 * p.lambda_k + 1;
  ProfileState s;
  s.grid = uniform_grid(0.5, 12, 4000);
  for (double r : s.grid) s.Q.push_back(r + eps * std::pow(r, m));
  s.left = Boundary::pinned(s.Q.front());
  s.t = 0.99;
  const auto rep = h_bound_report({s}, p, w, 1.0);
  CHECK(rep.chain_dominates);
  CHECK(rep.sup_chain <= supersolution_bracket(p) * eps * std::pow(w.Gamma, m - 2) * (1 + 1e-3));
  CHECK(h_chain(4, 2.0, 0.0, 0.0, 0.0) == 0.0);

  const auto cone = cone_state(uniform_grid(0.5, 12, 400));
  ProfileState c = cone;
  c.t = 0.99;
  CHECK(h_bound_report({c}, p, w, 1.0).sup_H <= 1e-10);

  const auto mp = integrate_profile(4, 1.0, 200, 1e-12);
  EvolveOptions opt;
  for (int i = 1; i <= 16; ++i) opt.snapshot_times.push_back(0.9 + 0.005 * i);
  const auto tr = evolve(minimal_state(mp, graded_grid(40, 1e-3, 1, 1)), 4, 0.99, {}, opt);
  const auto rm = h_bound_report(tr.snapshots, p, w, 1.0);
  CHECK(rm.points > 0);
  CHECK(rm.chain_dominates);
  CHECK(std::isfinite(rm.sup_H));
  CHECK(rm.sup_H <= 1e-3);

  ProfileState below = c;
  below.Q[200] -= 1e-3;
  try {
    h_bound_report({below}, p, w, 1.0);
    FAIL("expected v >= 0 to fail");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisFailed);
  }
}
