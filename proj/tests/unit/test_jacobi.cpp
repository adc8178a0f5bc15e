#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "mcf/errors.hpp"
#include "mcf/jacobi.hpp"
#include "mcf/numerics/quadrature.hpp"
#include "mcf/params.hpp"

using namespace mcf;

namespace {

std::shared_ptr<const MinimalProfile> profile(int n, double b, double r_max) {
  return std::make_shared<const MinimalProfile>(integrate_profile(n, b, r_max, 1e-11));
}

// Smooth bump supported in (c - w, c + w) with jets.
struct Bump {
  double c, w, amp;
  void operator()(double r, double& u, double& u1, double& u2) const {
    const double x = (r - c) / w;
    if (std::abs(x) >= 1) {
      u = u1 = u2 = 0;
      return;
    }
    const double s = 1 - x * x;
    const double e = std::exp(-1 / s);
    const double ds = -2 * x / w;
    const double d2s = -2 / (w * w);
    // u = amp e^{-1/s}
    const double f1 = 1 / (s * s);
    u = amp * e;
    u1 = amp * e * f1 * ds;
    u2 = amp * e * ((f1 * ds) * (f1 * ds) + (-2 / (s * s * s)) * ds * ds + f1 * d2s);
  }
};

}  // namespace

TEST_CASE("assembled coefficients (n=4, b=1)") {
  const auto mp = profile(4, 1.0, 1000.0);
  const JacobiData jd = assemble(mp);
  for (std::size_t i = 0; i < jd.size(); ++i) {
    CHECK(jd.J[i] > 0);
    CHECK(jd.V[i] > 0);
  }
  CHECK(jd.J_lower > 0);
  CHECK(std::isfinite(jd.J_upper));
  const double rmax = jd.r.back();
  CHECK(jd.V.back() * rmax * rmax == doctest::Approx(6.0).epsilon(0.05));
  CHECK(jd.W.back() < 0);
  CHECK(jd.W.back() * rmax == doctest::Approx(-2.0).epsilon(0.05));
  const double r = 1.0 / 50;
  CHECK(jacobi_coeffs(*mp, r).J / std::pow(r, 3) == doctest::Approx(1.0).epsilon(0.01));
  // Potential against the bracket at a handful of nodes.
  for (std::size_t i = 0; i < jd.size(); i += 97) {
    const auto j = mp->jet_at(jd.r[i]);
    const double g = 1 + j.q1 * j.q1;
    const double V = std::pow(j.q2 / g, 2) + 3 * j.q1 * j.q1 / (j.r * j.r) + 3 / (j.q * j.q);
    CHECK(std::abs(jd.V[i] - V) <= 1e-10 * V);
  }
  // Axis value against extrapolation of the sampled potential.
  const double V0 = jacobi_axis_potential(4, 1.0);
  const double extrap = (jd.r[1] * jd.V[0] - jd.r[0] * jd.V[1]) / (jd.r[1] - jd.r[0]);
  CHECK(extrap == doctest::Approx(V0).epsilon(1e-5));
}

TEST_CASE("u0 is in the kernel") {
  for (int n : {4, 5}) {
    const auto mp = profile(n, 1.0, 1000.0);
    const JacobiData jd = assemble(mp);
    const auto Lu = apply_L(jd, jd.u0, jd.u0_1, jd.u0_2);
    double worst = 0;
    for (std::size_t i = 0; i < jd.size() && jd.r[i] <= jd.r.back() / 2; ++i) worst = std::max(worst, std::abs(Lu[i]));
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("factorization L = -A* A on random bumps") {
  const auto mp = profile(4, 1.0, 200.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> C(0.2, 20), Wd(0.05, 3), A(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const Bump bump{C(rng), Wd(rng), A(rng)};
    double worst = 0, u2max = 0;
    for (int k = 1; k < 400; ++k) {
      const double r = bump.c - bump.w + 2 * bump.w * k / 400.0;
      if (r <= 0) continue;
      double u, u1, u2;
      bump(r, u, u1, u2);
      const auto c = jacobi_coeffs(*mp, r);
      const double Lu = u2 + c.dlogJ * u1 + c.V * u;
      const double z = -u1 + c.W * u;
      const double z1 = -u2 + c.W1 * u + c.W * u1;
      const double AstarA = z1 + c.dlogJ * z + c.W * z;
      worst = std::max(worst, std::abs(Lu + AstarA));
      u2max = std::max(u2max, std::abs(u2));
    }
    CHECK(worst <= 1e-8 * (1 + u2max));
  }
}

TEST_CASE("adjunction identity") {
  const auto mp = profile(4, 1.0, 200.0);
  const Bump bu{1.5, 1.0, 1.0}, bv{2.0, 1.2, 0.7};
  auto lhs = [&](double r) {
    if (r <= 0) return 0.0;
    double u, u1, u2, v, v1, v2;
    bu(r, u, u1, u2);
    bv(r, v, v1, v2);
    const auto c = jacobi_coeffs(*mp, r);
    return (-u1 + c.W * u) * v * c.J;
  };
  auto rhs = [&](double r) {
    if (r <= 0) return 0.0;
    double u, u1, u2, v, v1, v2;
    bu(r, u, u1, u2);
    bv(r, v, v1, v2);
    const auto c = jacobi_coeffs(*mp, r);
    return u * (v1 + c.dlogJ * v + c.W * v) * c.J;
  };
  const auto a = integrate(lhs, 0.5, 3.2, 1e-12);
  const auto b = integrate(rhs, 0.5, 3.2, 1e-12);
  CHECK(std::abs(a.value - b.value) <= 1e-10 * (std::abs(a.value) + 1) + a.error + b.error);
}

TEST_CASE("inverse of L") {
  const auto mp = profile(4, 1.0, 1000.0);
  const JacobiData jd = assemble(mp);
  const std::size_t N = jd.size();
  std::vector<double> zero(N, 0.0);
  for (double v : invert_L(jd, zero).u) CHECK(v == 0.0);

  // Polynomial bump (1 - x^2)^6: compact support with bounded derivatives.
  std::vector<double> f(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double x = (jd.r[i] - 3.0) / 2.5;
    f[i] = std::abs(x) < 1 ? std::pow(1 - x * x, 6) : 0.0;
  }
  const auto inv = invert_L(jd, f);
  CHECK(inv.integrable);
  const auto back = apply_L(jd, inv.u);
  double fmax = 0, err = 0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  for (std::size_t i = N / 4; i < 3 * N / 4; ++i) err = std::max(err, std::abs(back[i] - f[i]));
  CHECK(err / fmax <= 1e-5);
}

TEST_CASE("generalized kernel exponents (n=4)") {
  const auto mp = profile(4, 1.0, std::pow(10.0, 3.5));
  const JacobiData jd = assemble(mp);
  const auto terms = generalized_kernel(jd, 3);
  const double alpha = -2.0;
  for (const auto& t : terms) {
    INFO("j = " << t.j << " inner " << t.inner_exponent << " outer " << t.outer_exponent << " res " << t.residual);
    const double in = 2.0 * t.j, out = 2.0 * t.j + alpha;
    CHECK(std::abs(t.inner_exponent - in) <= std::max(0.05, 0.05 * std::abs(in)));
    CHECK(std::abs(t.outer_exponent - out) <= std::max(0.05, 0.05 * std::abs(out)));
    CHECK(t.min_value > 0);
    CHECK(t.residual <= (t.j == 0 ? 1e-6 : 1e-5));
  }
  for (std::size_t j = 1; j < terms.size(); ++j)
    CHECK(terms[j].outer_exponent - terms[j - 1].outer_exponent == doctest::Approx(2.0).epsilon(0.05));
  CHECK_THROWS_AS(generalized_kernel(assemble(profile(4, 1.0, 500.0)), 3), Error);
}

TEST_CASE("indicial roots and the second kernel element") {
  const auto r4 = indicial_roots(4);
  CHECK(r4.inf_plus == doctest::Approx(-2.0));
  CHECK(r4.inf_minus == doctest::Approx(-3.0));
  CHECK(r4.zero_singular == -2.0);
  CHECK(indicial_roots(5).inf_minus == doctest::Approx(-5.5616).epsilon(1e-4));
  for (int n : {4, 5}) {
    const auto mp = profile(n, 1.0, 1000.0);
    const JacobiData jd = assemble(mp);
    const auto v0 = second_solution(jd);
    CHECK(v0.inner_exponent == doctest::Approx(-(n - 2.0)).epsilon(0.05));
    CHECK(v0.wronskian_spread < 0.01);
    const auto Lv = apply_L(jd, v0.v);
    for (std::size_t i = jd.size() / 4; i < 3 * jd.size() / 4; ++i)
      CHECK(std::abs(Lv[i]) <= 1e-4 * std::abs(jd.V[i] * v0.v[i]));
  }
}

TEST_CASE("top eigenvalue of the Jacobi operator") {
  const auto mp = profile(4, 1.0, 1000.0);
  const auto s50 = top_eigenvalue(*mp, 50.0, 4000);
  CHECK(s50.top <= 1e-3);
  CHECK(s50.top < 0);
  const auto s25 = top_eigenvalue(*mp, 25.0, 2000);
  CHECK(s25.top <= s50.top + 1e-6);
  // Truncated u0: quotient is O(R^-2) and negative.
  const double q25 = u0_rayleigh_quotient(*mp, 25.0);
  const double q250 = u0_rayleigh_quotient(*mp, 250.0);
  CHECK(q25 < 0);
  CHECK(q25 >= s50.top - 1.0);
  CHECK(std::abs(q250) < 1e-3);
  CHECK(q25 / q250 == doctest::Approx(100.0).epsilon(0.3));
}
