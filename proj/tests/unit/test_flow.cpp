#include <doctest.h>

#include <cmath>
#include <random>

#include "mcf/errors.hpp"
#include "mcf/flow.hpp"
#include "mcf/minimal_surface.hpp"
#include "mcf/numerics/grid.hpp"
#include "mcf/params.hpp"

using namespace mcf;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("cylinder single step") {
  const auto s = cylinder_state(4, 1.0, uniform_grid(0, 3, 200));
  const auto next = step(s, 1e-3, 4);
  CHECK(next.t == doctest::Approx(1e-3));
  for (double q : next.Q) CHECK(std::abs(q - std::sqrt(6 * 0.999)) <= 1e-7);
}

TEST_CASE("cone is stationary") {
  const auto s = cone_state(uniform_grid(0.5, 10, 400));
  CHECK(sup_diff(step(s, 0.1, 4).Q, s.Q) <= 1e-10);
  const auto tr = evolve(s, 5, 1.0);
  CHECK(sup_diff(tr.snapshots.back().Q, s.Q) <= 1e-10);
  for (std::size_t i = 1; i < tr.diag.times.size(); ++i) {
    CHECK(std::abs(tr.diag.Amax[i] - tr.diag.Amax[0]) <= 1e-8);
    CHECK(std::abs(tr.diag.Hmax[i] - tr.diag.Hmax[0]) <= 1e-8);
  }
}

TEST_CASE("shrinking cylinder") {
  EvolveOptions opt;
  opt.snapshot_times = {0.5, 0.9};
  const auto tr = evolve(cylinder_state(4, 1.0, uniform_grid(0, 5, 3999)), 4, 0.99, {}, opt);
  CHECK(tr.stop_reason == "horizon");
  REQUIRE(tr.snapshots.size() == 4);
  CHECK(tr.snapshots[2].t == 0.9);
  for (double q : tr.snapshots[2].Q) CHECK(std::abs(q / std::sqrt(0.6) - 1) <= 1e-4);
  for (std::size_t i = 0; i < tr.diag.times.size(); ++i) {
    CHECK(std::abs(tr.diag.Amax[i] * std::sqrt(2 * (1 - tr.diag.times[i])) - 1) <= 5e-3);
    CHECK(tr.diag.Amax[i] >= tr.diag.Hmax[i] / std::sqrt(7.0) * (1 - 1e-12));
  }
  CHECK(std::abs(fit_rate(tr.diag.times, tr.diag.Amax, 1.0, 0.01, 0.5).exponent + 0.5) <= 0.005);
  CHECK(tr.diag.T_est == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("cylinder time refinement") {
  std::vector<double> err;
  for (double dt : {0.05, 0.025, 0.0125}) {
    EvolveOptions opt;
    opt.fixed_dt = dt;
    const auto tr = evolve(cylinder_state(4, 1.0, uniform_grid(0, 2, 50)), 4, 0.5, {}, opt);
    err.push_back(std::abs(tr.snapshots.back().Q[0] - std::sqrt(3.0)));
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
  CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("shrinking sphere") {
  EvolveOptions opt;
  opt.snapshot_times = {0.2, 0.5, 0.8};
  const auto tr = evolve(sphere_state(4, 1.0, uniform_grid(0, 1, 400)), 4, 0.9, {}, opt);
  const auto& d = tr.diag;
  for (std::size_t i = 0; i < d.times.size(); ++i) {
    CHECK(std::abs(d.Qaxis[i] * d.Qaxis[i] / (14 * (1 - d.times[i])) - 1) <= 1e-3);
    CHECK(d.Amax[i] >= d.Hmax[i] / std::sqrt(7.0) * (1 - 1e-12));
  }
  CHECK(std::abs(estimate_singular_time(d.times, d.Qaxis) - 1) <= 1e-3);
  CHECK(std::abs(fit_rate(d.times, d.Amax, 1.0, 0.1, 1.0).exponent + 0.5) <= 0.005);

  const Params p = derive_constants(4, 4);
  const auto x = uniform_grid(0, 1, 50);
  for (std::size_t k = 1; k < tr.snapshots.size(); ++k) {
    const auto q = to_parabolic(tr.snapshots[k], p, x);
    CHECK(q.s == doctest::Approx(-std::log(1 - tr.snapshots[k].t)));
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(std::abs(q.values[i] / std::sqrt(14 - x[i] * x[i]) - 1) <= 1e-3);
  }
}

TEST_CASE("stop rules") {
  StopRule stop;
  stop.Qmin_floor = 1.0;
  const auto tr = evolve(cylinder_state(4, 1.0, uniform_grid(0, 1, 20)), 4, 0.99, stop);
  CHECK(tr.stop_reason == "Qmin_floor");
  CHECK(tr.diag.Qmin.back() <= 1.0);
  StopRule cap;
  cap.Amax_cap = 3.0;
  CHECK(evolve(cylinder_state(4, 1.0, uniform_grid(0, 1, 20)), 4, 0.99, cap).stop_reason == "Amax_cap");
}

TEST_CASE("singular time estimate and rate fits") {
  std::vector<double> t, m;
  for (int i = 0; i < 50; ++i) {
    t.push_back(0.02 * i);
    m.push_back(std::sqrt(3 * (1.2 - t.back())));
  }
  CHECK(estimate_singular_time(t, m) == doctest::Approx(1.2).epsilon(1e-12));

  std::vector<double> ts, M;
  for (int i = 0; i < 40; ++i) {
    ts.push_back(1 - std::pow(10.0, -3.0 * i / 39));
    M.push_back(std::pow(1 - ts.back(), -4.0 / 3));
  }
  ts.back() = 1 - 1e-3;
  const RateFit f = fit_rate(ts, M, 1.0, 1e-3, 1.0);
  CHECK(f.exponent == doctest::Approx(-4.0 / 3).epsilon(1e-12));
  CHECK_THROWS_AS(fit_rate(ts, M, 1.0, 0.1, 0.5), Error);
}

TEST_CASE("comparison principle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  const auto grid = uniform_grid(0, 3, 150);
  for (int pair = 0; pair < 5; ++pair) {
    const double a = 1.5 + U(rng), b = 0.3 * U(rng), w = 0.5 + 2 * U(rng), eps = 0.01 + 0.1 * U(rng);
    ProfileState s1, s2;
    s1.grid = s2.grid = grid;
    for (double r : grid) {
      const double q = a + b * std::cos(w * r) * std::exp(-r * r);
      s1.Q.push_back(q);
      s2.Q.push_back(q + eps * (1 + 0.5 * std::cos(r)));
    }
    s1.right = Boundary::pinned(s1.Q.back());
    s2.right = Boundary::pinned(s2.Q.back());
    EvolveOptions opt;
    opt.fixed_dt = 1e-3;
    for (int k = 1; k <= 10; ++k) opt.snapshot_times.push_back(0.02 * k);
    const auto t1 = evolve(s1, 4, 0.2, {}, opt), t2 = evolve(s2, 4, 0.2, {}, opt);
    REQUIRE(t1.snapshots.size() == t2.snapshots.size());
    for (std::size_t k = 0; k < t1.snapshots.size(); ++k)
      for (std::size_t i = 0; i < grid.size(); ++i) CHECK(t2.snapshots[k].Q[i] > t1.snapshots[k].Q[i]);
  }
}

TEST_CASE("minimal profile drift shrinks under refinement") {
  const auto mp = integrate_profile(4, 1.0, 100, 1e-12);
  std::vector<double> drift;
  for (double h0 : {2e-3, 1e-3}) {
    const auto s = minimal_state(mp, graded_grid(20, h0, 3, 1));
    drift.push_back(sup_diff(evolve(s, 4, 1.0).snapshots.back().Q, s.Q));
  }
  CHECK(drift[1] <= 1e-6);
  CHECK(drift[0] / drift[1] >= 3.5);
}

TEST_CASE("inner rescaling") {
  const Params p = derive_constants(4, 4);
  CHECK(inner_time(p, 0.99) == doctest::Approx(0.6 * std::pow(100.0, 5.0 / 3)).epsilon(1e-12));
  CHECK(inner_time(p, 0.99) == doctest::Approx(1292.66).epsilon(1e-5));
  CHECK_THROWS_AS(inner_time(p, 1.0), Error);

  const auto mp = integrate_profile(4, 1.0, 100, 1e-12);
  const double t = 0.9, lam = inner_scale(p, t);
  ProfileState s;
  s.t = t;
  s.grid = uniform_grid(0, 30 * lam, 3000);
  for (double r : s.grid) s.Q.push_back(lam * mp.jet_at(r / lam).q);
  s.right = Boundary::pinned(s.Q.back());
  const auto x = uniform_grid(0.0137, 19.9, 173);
  const auto L = to_inner(s, p, x);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(L.values[i] - mp.jet_at(x[i]).q) <= 1e-6);

  const auto cone = cone_state(uniform_grid(1e-3, 1, 200));
  ProfileState c = cone;
  c.t = 0.5;
  const auto Lc = to_inner(c, p, uniform_grid(0.1, 1.5, 20));
  for (std::size_t i = 0; i < Lc.grid.size(); ++i) CHECK(Lc.values[i] == doctest::Approx(Lc.grid[i]).epsilon(1e-12));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.5, 1.5);
  RescaledState R;
  R.grid = uniform_grid(0, 5, 60);
  for (std::size_t i = 0; i < R.grid.size(); ++i) R.values.push_back(U(rng));
  R.s = 40;
  const auto back = to_inner(from_inner(R, p), p, R.grid);
  CHECK(back.s == doctest::Approx(R.s).epsilon(1e-12));
  CHECK(sup_diff(back.values, R.values) <= 1e-12);
  R.s = 2.0;
  const auto pb = to_parabolic(from_parabolic(R, p), p, R.grid);
  CHECK(sup_diff(pb.values, R.values) <= 1e-12);
}

TEST_CASE("cylinder and cone under parabolic rescaling") {
  const Params p = derive_constants(5, 3);
  EvolveOptions opt;
  opt.snapshot_times = {0.5};
  const auto tr = evolve(cylinder_state(5, 1.0, uniform_grid(0, 2, 100)), 5, 0.5, {}, opt);
  const auto q = to_parabolic(tr.snapshots.back(), p, uniform_grid(0, 2, 10));
  for (double v : q.values) CHECK(v == doctest::Approx(std::sqrt(8.0)).epsilon(1e-6));
  auto cone = cone_state(uniform_grid(0.1, 2, 100));
  const auto qc = to_parabolic(cone, p, uniform_grid(0.2, 1.5, 10));
  for (std::size_t i = 0; i < qc.grid.size(); ++i) CHECK(qc.values[i] == doctest::Approx(qc.grid[i]).epsilon(1e-12));
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(cone_state(uniform_grid(0, 1, 10)), Error);
  CHECK_THROWS_AS(sphere_state(4, 1.0, uniform_grid(0, 4, 10)), Error);
  auto s = cylinder_state(4, 1.0, uniform_grid(0, 1, 10));
  s.Q[3] = -1;
  CHECK_THROWS_AS(validate(s), Error);
  CHECK_THROWS_AS(step(cylinder_state(4, 1.0, uniform_grid(0, 1, 10)), 0.0, 4), Error);
  try {
    step(cylinder_state(4, 0.01, uniform_grid(0, 1, 10)), 1.0, 4);
    FAIL("expected a breakdown past the singular time");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::QNonPositive || e.code() == ErrorCode::NewtonDiverged));
  }
}
