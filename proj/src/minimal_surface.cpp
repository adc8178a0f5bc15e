#include "mcf/minimal_surface.hpp"

#include <algorithm>
#include <cmath>

#include "mcf/errors.hpp"
#include "mcf/numerics/fit.hpp"
#include "mcf/numerics/grid.hpp"
#include "mcf/numerics/interp.hpp"
#include "mcf/numerics/ode.hpp"
#include "mcf/params.hpp"

namespace mcf {

namespace {

// Coefficients of a polynomial in r, dense by degree.
using Poly = std::vector<double>;

Poly multiply(const Poly& a, const Poly& b, std::size_t max_degree) {
  Poly c(max_degree + 1, 0.0);
  for (std::size_t i = 0; i < a.size() && i <= max_degree; ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= max_degree; ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly derivative(const Poly& a) {
  Poly d(a.size() > 1 ? a.size() - 1 : 1, 0.0);
  for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = i * a[i];
  return d;
}

}  // namespace

std::vector<double> axis_series(int n, double b, int terms) {
  const double m = n - 1.0;
  std::vector<double> c(terms, 0.0);
  c[0] = b;
  for (int J = 1; J < terms; ++J) {
    const std::size_t deg = 2 * J + 1;
    Poly Q(deg + 1, 0.0);
    for (int j = 0; j < J; ++j) Q[2 * j] = c[j];
    const Poly Q1 = derivative(Q);
    const Poly Q2 = derivative(Q1);
    // P = r Q Q'' - (n-1)(1 + Q'^2)(r - Q Q') with c_J = 0.
    Poly rQQ2 = multiply(Q, Q2, deg);
    rQQ2.insert(rQQ2.begin(), 0.0);
    Poly g = multiply(Q1, Q1, deg);
    g[0] += 1.0;
    Poly h = multiply(Q, Q1, deg);
    for (double& v : h) v = -v;
    h[1] += 1.0;
    const Poly rhs = multiply(g, h, deg);
    const double p = rQQ2[2 * J - 1] - m * rhs[2 * J - 1];
    c[J] = -p / (2.0 * J * (2.0 * J + n - 2.0) * b);
  }
  return c;
}

double minimal_q2(int n, double r, double q, double q1) {
  const double m = n - 1.0;
  if (r == 0.0) return m / (n * q);
  return (1.0 + q1 * q1) * m * (1.0 / q - q1 / r);
}

double minimal_q3(int n, const ProfileJet& j) {
  const double m = n - 1.0;
  const double p = j.q1, g = 1.0 + p * p;
  if (j.r == 0.0) return 0.0;
  const double Fr = m * g * p / (j.r * j.r);
  const double FQ = -m * g / (j.q * j.q);
  const double Fp = m * (2.0 * p * (1.0 / j.q - p / j.r) - g / j.r);
  return Fr + FQ * p + Fp * j.q2;
}

MinimalProfile integrate_profile(int n, double b, double r_max, double tol, const MinimalOptions& opt) {
  if (n < 4) fail(ErrorCode::Domain, "n must be >= 4");
  if (!(b > 0)) fail(ErrorCode::Domain, "b must be positive");
  if (r_max < 50.0 * b) fail(ErrorCode::Domain, "r_max must be at least 50 b");
  if (tol < 1e-12 || tol > 1e-6) fail(ErrorCode::Domain, "tol must lie in [1e-12, 1e-6]");

  MinimalProfile mp;
  mp.n = n;
  mp.b = b;
  mp.r_max = r_max;
  mp.tol = tol;
  mp.grid = geometric_grid(opt.r_first * b, r_max, opt.per_decade);
  mp.grid.insert(mp.grid.begin(), 0.0);
  const std::size_t N = mp.grid.size();
  mp.q.assign(N, 0.0);
  mp.q1.assign(N, 0.0);
  mp.q2.assign(N, 0.0);
  mp.w.assign(N, 0.0);
  mp.w1.assign(N, 0.0);

  const auto c = axis_series(n, b, 8);
  auto series = [&](double r) {
    ProfileJet j{r, 0, 0, 0};
    const double x = r * r;
    double pw = 1.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      j.q += c[k] * pw;
      if (k >= 1) {
        j.q1 += 2.0 * k * c[k] * pw / r;
        j.q2 += 2.0 * k * (2.0 * k - 1.0) * c[k] * pw / x;
      }
      pw *= x;
    }
    if (r == 0.0) {
      j.q1 = 0.0;
      j.q2 = 2.0 * c[1];
    }
    return j;
  };

  const double r_seed = opt.seed_fraction * b;
  const ProfileJet seed = series(r_seed);
  mp.seed_residual = std::abs(seed.q2 - minimal_q2(n, r_seed, seed.q, seed.q1)) / (1.0 + std::abs(seed.q2));
  if (mp.seed_residual > 10.0 * tol) fail(ErrorCode::SeedTooCoarse, "series seed residual exceeds 10 tol");

  std::size_t first = 0;
  while (first < N && mp.grid[first] < r_seed) {
    const ProfileJet j = series(mp.grid[first]);
    mp.q[first] = j.q;
    mp.q1[first] = j.q1;
    mp.q2[first] = j.q2;
    mp.w[first] = j.q - j.r;
    mp.w1[first] = j.q1 - 1.0;
    ++first;
  }

  using Solver = DormandPrince45<2>;
  const double m = n - 1.0;
  auto rhs = [m](double r, const Solver::State& y, Solver::State& dy) {
    const double w = y[0], w1 = y[1];
    const double p = 1.0 + w1;
    dy[0] = w1;
    dy[1] = (1.0 + p * p) * m * (-w - r * w1 - w * w1) / (r * (r + w));
  };
  OdeOptions oo;
  oo.rtol = tol;
  oo.atol = tol * 1e-8 * b;
  oo.h_init = 0.1 * r_seed;
  Solver solver(oo);
  std::span<const double> outs(mp.grid.data() + first, N - first);
  const OdeStats st = solver.integrate(
      rhs, r_seed, {seed.q - r_seed, seed.q1 - 1.0}, outs,
      [&](std::size_t k, double r, const Solver::State& y) {
        const std::size_t i = first + k;
        mp.w[i] = y[0];
        mp.w1[i] = y[1];
        mp.q[i] = r + y[0];
        mp.q1[i] = 1.0 + y[1];
        Solver::State d;
        rhs(r, y, d);
        mp.q2[i] = d[1];
      },
      [](double, const Solver::State& y) {
        if (1.0 + y[1] > 10.0) fail(ErrorCode::BlowupDetected, "Q' exceeded 10");
        return true;
      });
  mp.ode_residual = st.max_defect;
  mp.steps = st.accepted;

  const TailFit tf = fit_tail(mp);
  mp.C_b = tf.C_b;
  mp.alpha_fit = tf.alpha_fit;
  mp.tail_resid = tf.resid;
  return mp;
}

ProfileJet MinimalProfile::jet_at(double r) const {
  if (r > r_max) {
    const double a = alpha_fit;
    const double t = C_b * std::pow(r, a);
    return {r, r + t, 1.0 + a * t / r, a * (a - 1.0) * t / (r * r)};
  }
  const Jet2 j = hermite5(grid, q, q1, q2, r);
  // Q'' from the equation rather than the interpolant, so that jets at
  // arbitrary radii satisfy the ODE exactly.
  ProfileJet out{r, j.f, j.df, 0.0};
  if (r == 0.0) out.q1 = 0.0;
  out.q2 = minimal_q2(n, r, out.q, out.q1);
  return out;
}

double MinimalProfile::w_at(double r) const {
  if (r > r_max) return C_b * std::pow(r, alpha_fit);
  return hermite5(grid, w, w1, q2, r).f;
}

TailFit fit_tail(const MinimalProfile& mp, double r_lo, double r_hi) {
  if (r_hi > mp.r_max * (1 + 1e-12)) fail(ErrorCode::Domain, "tail window exceeds r_max");
  for (std::size_t i = 0; i < mp.size(); ++i)
    if (mp.grid[i] >= r_lo && mp.grid[i] <= r_hi && !(mp.w[i] > 0))
      fail(ErrorCode::NonPositiveTail, "Q - r <= 0 inside the tail window");
  const RateFit f = fit_loglog(mp.grid, mp.w, r_lo, r_hi, 20);
  return {std::exp(f.intercept), f.exponent, f.resid, f.points};
}

TailFit fit_tail(const MinimalProfile& mp) { return fit_tail(mp, 20.0 * mp.b, 0.8 * mp.r_max); }

double verify_scaling(const MinimalProfile& mp1, const MinimalProfile& mpb) {
  const double b = mpb.b / mp1.b;
  double worst = 0.0;
  for (std::size_t i = 0; i < mpb.size(); ++i) {
    const double r = mpb.grid[i];
    if (r / b > mp1.r_max) break;
    worst = std::max(worst, std::abs(mpb.w[i] - b * mp1.w_at(r / b)));
  }
  return worst;
}

std::vector<double> u0_profile(const MinimalProfile& mp) {
  std::vector<double> u(mp.size());
  for (std::size_t i = 0; i < mp.size(); ++i) {
    u[i] = (mp.w[i] - mp.grid[i] * mp.w1[i]) / std::hypot(1.0, mp.q1[i]);
    if (!(u[i] > 0)) fail(ErrorCode::PositivityViolated, "u0 is not positive at r = " + std::to_string(mp.grid[i]));
  }
  return u;
}

FunctionJet u0_jet(const MinimalProfile& mp, double r) {
  const ProfileJet j = mp.jet_at(r);
  double w, w1;
  if (r > mp.r_max) {
    w = mp.w_at(r);
    w1 = j.q1 - 1.0;
  } else {
    const Jet2 h = hermite5(mp.grid, mp.w, mp.w1, mp.q2, r);
    w = h.f;
    w1 = h.df;
  }
  const double q3 = minimal_q3(mp.n, j);
  const double p = j.q1, g = 1.0 + p * p, s = std::sqrt(g);
  const double N = w - r * w1;
  const double N1 = -r * j.q2;
  const double N2 = -j.q2 - r * q3;
  const double f = 1.0 / s;
  const double f1 = -p * j.q2 / (g * s);
  const double f2 = -(j.q2 * j.q2 + p * q3) / (g * s) + 3.0 * p * p * j.q2 * j.q2 / (g * g * s);
  return {N * f, N1 * f + N * f1, N2 * f + 2.0 * N1 * f1 + N * f2};
}

U0Tail fit_u0_tail(const MinimalProfile& mp, double r_lo, double r_hi) {
  const auto u = u0_profile(mp);
  const RateFit f = fit_loglog(mp.grid, u, r_lo, r_hi, 20);
  const double alpha = derive_constants(mp.n, 2).alpha;
  U0Tail t;
  t.exponent = f.exponent;
  t.coefficient = std::exp(f.intercept);
  t.predicted_coefficient = (1.0 - alpha) * mp.C_b / std::sqrt(2.0);
  t.resid = f.resid;
  return t;
}

}  // namespace mcf
