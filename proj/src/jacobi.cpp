#include "mcf/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcf/errors.hpp"
#include "mcf/numerics/fd.hpp"
#include "mcf/numerics/fit.hpp"
#include "mcf/numerics/grid.hpp"
#include "mcf/numerics/ode.hpp"
#include "mcf/numerics/quadrature.hpp"
#include "mcf/numerics/tridiag.hpp"
#include "mcf/params.hpp"

namespace mcf {

JacobiCoeffs jacobi_coeffs(const MinimalProfile& mp, double r) {
  if (!(r > 0)) fail(ErrorCode::Domain, "Jacobi coefficients need r > 0");
  const double m = mp.n - 1.0;
  const ProfileJet j = mp.jet_at(r);
  const FunctionJet u = u0_jet(mp, r);
  JacobiCoeffs c;
  c.r = r;
  c.g = 1.0 + j.q1 * j.q1;
  c.J = std::pow(r * j.q, m) / std::sqrt(c.g);
  c.dlogJ = m / r + m * j.q1 / j.q - j.q1 * j.q2 / c.g;
  const double k = j.q2 / c.g;
  c.V = k * k + m * j.q1 * j.q1 / (r * r) + m / (j.q * j.q);
  c.u0 = u.u;
  c.u0_1 = u.u1;
  c.u0_2 = u.u2;
  c.W = u.u1 / u.u;
  c.W1 = u.u2 / u.u - c.W * c.W;
  return c;
}

double jacobi_axis_potential(int n, double b) {
  const double q2 = (n - 1.0) / (n * b);
  return n * q2 * q2 + (n - 1.0) / (b * b);
}

JacobiData assemble(std::shared_ptr<const MinimalProfile> mp, const JacobiOptions& opt) {
  JacobiData jd;
  jd.mp = mp;
  jd.n = mp->n;
  jd.r = geometric_grid(opt.r_first * mp->b, mp->r_max, opt.per_decade);
  jd.log_step = std::log(jd.r[1] / jd.r[0]);
  const std::size_t N = jd.r.size();
  jd.J.resize(N);
  jd.dlogJ.resize(N);
  jd.V.resize(N);
  jd.g.resize(N);
  jd.W.resize(N);
  jd.u0.resize(N);
  jd.u0_1.resize(N);
  jd.u0_2.resize(N);
  jd.J_lower = std::numeric_limits<double>::infinity();
  jd.J_upper = 0.0;
  const double m = jd.n - 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    const JacobiCoeffs c = jacobi_coeffs(*mp, jd.r[i]);
    jd.J[i] = c.J;
    jd.dlogJ[i] = c.dlogJ;
    jd.V[i] = c.V;
    jd.g[i] = c.g;
    jd.W[i] = c.W;
    jd.u0[i] = c.u0;
    jd.u0_1[i] = c.u0_1;
    jd.u0_2[i] = c.u0_2;
    if (!(c.u0 > 0)) fail(ErrorCode::PositivityViolated, "u0 not positive while assembling");
    const double ratio = c.J / std::pow((1.0 + jd.r[i]) * jd.r[i], m);
    jd.J_lower = std::min(jd.J_lower, ratio);
    jd.J_upper = std::max(jd.J_upper, ratio);
  }
  return jd;
}

std::vector<double> apply_L(const JacobiData& jd, const std::vector<double>& u) {
  if (u.size() != jd.size()) fail(ErrorCode::GridMismatch, "samples do not match the Jacobi grid");
  const std::size_t N = u.size();
  std::vector<double> phi(N), d1, d2, flux(N), out(N);
  for (std::size_t i = 0; i < N; ++i) phi[i] = u[i] / jd.u0[i];
  uniform_derivatives(phi, jd.log_step, 2, d1, d2);
  // d/dr = (1/r) d/ds with s = log r.
  for (std::size_t i = 0; i < N; ++i) flux[i] = jd.J[i] * jd.u0[i] * jd.u0[i] * d1[i] / jd.r[i];
  uniform_derivatives(flux, jd.log_step, 2, d1, d2);
  for (std::size_t i = 0; i < N; ++i) out[i] = d1[i] / (jd.r[i] * jd.J[i] * jd.u0[i]);
  return out;
}

std::vector<double> apply_L(const JacobiData& jd, const std::vector<double>& u,
                            const std::vector<double>& u1, const std::vector<double>& u2) {
  if (u.size() != jd.size() || u1.size() != jd.size() || u2.size() != jd.size())
    fail(ErrorCode::GridMismatch, "samples do not match the Jacobi grid");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u2[i] + jd.dlogJ[i] * u1[i] + jd.V[i] * u[i];
  return out;
}

namespace {

// int_0^{r_i} F dr for sampled F. The piece [0, r_0] assumes F ~ c r^p with
// p estimated from the first two samples.
std::vector<double> integral_from_axis(const JacobiData& jd, const std::vector<double>& F) {
  const std::size_t N = jd.size();
  std::vector<double> s(N), Fr(N);
  for (std::size_t i = 0; i < N; ++i) {
    s[i] = std::log(jd.r[i]);
    Fr[i] = F[i] * jd.r[i];
  }
  std::vector<double> I = cumulative_integral(s, Fr);
  double head = 0.0;
  if (F[0] != 0.0) {
    if (F[1] == 0.0 || (F[0] > 0) != (F[1] > 0))
      fail(ErrorCode::Domain, "integrand changes sign at the first node; cannot extrapolate to the axis");
    const double p = std::log(F[1] / F[0]) / jd.log_step;
    if (!(p > -1.0 + 1e-6)) fail(ErrorCode::Domain, "integrand is not integrable at the axis");
    head = F[0] * jd.r[0] / (p + 1.0);
  }
  for (double& v : I) v += head;
  return I;
}

}  // namespace

std::vector<double> invert_A_star(const JacobiData& jd, const std::vector<double>& f) {
  if (f.size() != jd.size()) fail(ErrorCode::GridMismatch, "samples do not match the Jacobi grid");
  std::vector<double> F(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) F[i] = f[i] * jd.J[i] * jd.u0[i];
  std::vector<double> I = integral_from_axis(jd, F);
  for (std::size_t i = 0; i < f.size(); ++i) I[i] /= jd.u0[i] * jd.J[i];
  return I;
}

AInverse invert_A(const JacobiData& jd, const std::vector<double>& g) {
  if (g.size() != jd.size()) fail(ErrorCode::GridMismatch, "samples do not match the Jacobi grid");
  const std::size_t N = jd.size();
  AInverse out;
  std::vector<double> h(N);
  bool all_zero = true;
  for (std::size_t i = 0; i < N; ++i) {
    h[i] = g[i] / jd.u0[i];
    all_zero = all_zero && h[i] == 0.0;
  }
  if (all_zero) {
    out.u.assign(N, 0.0);
    out.integrable = true;
    return out;
  }
  const double r_max = jd.r.back();
  const RateFit tail = fit_loglog(jd.r, h, r_max / 10.0, r_max, 20);
  out.tail_exponent = tail.exponent;
  if (std::abs(tail.exponent + 1.0) < 0.1)
    fail(ErrorCode::BranchAmbiguous, "tail exponent of g/u0 is " + std::to_string(tail.exponent) +
                                         ", too close to -1; increase r_max");
  out.integrable = tail.exponent < -1.0;
  out.u.resize(N);
  if (out.integrable) {
    std::vector<double> s(N), hr(N);
    for (std::size_t i = 0; i < N; ++i) {
      s[i] = std::log(jd.r[i]);
      hr[i] = h[i] * jd.r[i];
    }
    const std::vector<double> I = cumulative_integral(s, hr);
    // int_{r_max}^inf c r^e dr with the fitted exponent.
    const double beyond = -r_max * h.back() / (tail.exponent + 1.0);
    for (std::size_t i = 0; i < N; ++i) out.u[i] = jd.u0[i] * (I.back() - I[i] + beyond);
  } else {
    const std::vector<double> I = integral_from_axis(jd, h);
    for (std::size_t i = 0; i < N; ++i) out.u[i] = -jd.u0[i] * I[i];
  }
  return out;
}

LInverse invert_L(const JacobiData& jd, const std::vector<double>& f) {
  const std::vector<double> g = invert_A_star(jd, f);
  AInverse a = invert_A(jd, g);
  LInverse out;
  out.u = std::move(a.u);
  for (double& v : out.u) v = -v;
  out.integrable = a.integrable;
  out.tail_exponent = a.tail_exponent;
  return out;
}

std::pair<double, double> inner_fit_window(const JacobiData& jd) {
  return {jd.r.front(), 10.0 * jd.r.front()};
}

std::pair<double, double> outer_fit_window(const JacobiData& jd) {
  const double r_max = jd.r.back();
  return {r_max / 100.0, r_max / 2.0};
}

std::vector<KernelTerm> generalized_kernel(const JacobiData& jd, int j_max) {
  if (j_max < 0 || j_max > 4) fail(ErrorCode::Domain, "j_max must lie in [0, 4]");
  const double need = std::pow(10.0, 2.0 + j_max / 2.0) * jd.mp->b;
  if (jd.r.back() < need * (1 - 1e-12))
    fail(ErrorCode::Domain, "r_max must be at least " + std::to_string(need) + " for j_max = " +
                                std::to_string(j_max));
  const auto [ilo, ihi] = inner_fit_window(jd);
  const auto [olo, ohi] = outer_fit_window(jd);
  const std::size_t N = jd.size();
  std::vector<KernelTerm> terms;
  std::vector<double> prev;
  for (int j = 0; j <= j_max; ++j) {
    KernelTerm t;
    t.j = j;
    std::vector<double> f;
    if (j == 0) {
      t.u = jd.u0;
    } else {
      f.resize(N);
      for (std::size_t i = 0; i < N; ++i) f[i] = jd.g[i] * prev[i];
      t.u = invert_L(jd, f).u;
    }
    t.inner_exponent = fit_loglog(jd.r, t.u, ilo, ihi, 10).exponent;
    t.outer_exponent = fit_loglog(jd.r, t.u, olo, ohi, 20).exponent;
    t.min_value = *std::min_element(t.u.begin(), t.u.end());
    if (j == 0) {
      // Absolute residual from the analytic jets of u0 over r <= r_max / 2.
      const std::vector<double> Lu = apply_L(jd, jd.u0, jd.u0_1, jd.u0_2);
      for (std::size_t i = 0; i < N && jd.r[i] <= jd.r.back() / 2; ++i)
        t.residual = std::max(t.residual, std::abs(Lu[i]));
    } else {
      const std::vector<double> Lu = apply_L(jd, t.u);
      for (std::size_t i = N / 4; i < 3 * N / 4; ++i)
        t.residual = std::max(t.residual, std::abs(Lu[i] - f[i]) / std::abs(f[i]));
    }
    prev = t.u;
    terms.push_back(std::move(t));
  }
  return terms;
}

IndicialRoots indicial_roots(int n) {
  const Params p = derive_constants(n, 2);
  return {0.0, -(n - 2.0), p.alpha_plus, p.alpha_minus};
}

SecondSolution second_solution(const JacobiData& jd, double tol) {
  const MinimalProfile& mp = *jd.mp;
  const double am = derive_constants(jd.n, 2).alpha_minus;
  const std::size_t N = jd.size();
  using Solver = DormandPrince45<2>;
  auto rhs = [&mp](double r, const Solver::State& y, Solver::State& dy) {
    const JacobiCoeffs c = jacobi_coeffs(mp, r);
    dy[0] = y[1];
    dy[1] = -c.dlogJ * y[1] - c.V * y[0];
  };
  std::vector<double> outs(jd.r.rbegin(), jd.r.rend());
  SecondSolution s;
  s.r = jd.r;
  s.v.assign(N, 0.0);
  s.v1.assign(N, 0.0);
  const double R = jd.r.back();
  OdeOptions oo;
  oo.rtol = tol;
  oo.atol = 1e-300;
  oo.h_init = 1e-3 * R;
  Solver(oo).integrate(rhs, R, {std::pow(R, am), am * std::pow(R, am - 1.0)}, outs,
                       [&](std::size_t k, double, const Solver::State& y) {
                         s.v[N - 1 - k] = y[0];
                         s.v1[N - 1 - k] = y[1];
                       });
  const auto [ilo, ihi] = inner_fit_window(jd);
  s.inner_exponent = fit_loglog(jd.r, s.v, ilo, ihi, 10).exponent;
  std::vector<double> wr;
  for (int k = 0; k < 10; ++k) {
    const double r = 10.0 * jd.r.front() * std::pow(R / 2.0 / (10.0 * jd.r.front()), k / 9.0);
    const std::size_t i = std::min<std::size_t>(N - 1, std::lower_bound(jd.r.begin(), jd.r.end(), r) - jd.r.begin());
    wr.push_back(jd.J[i] * (jd.u0[i] * s.v1[i] - s.v[i] * jd.u0_1[i]));
  }
  const auto [mn, mx] = std::minmax_element(wr.begin(), wr.end());
  double mean = 0;
  for (double v : wr) mean += v / wr.size();
  s.wronskian_spread = (*mx - *mn) / std::abs(mean);
  return s;
}

Spectrum top_eigenvalue(const MinimalProfile& mp, double R, int nodes) {
  if (R > mp.r_max / 2 * (1 + 1e-12)) fail(ErrorCode::Domain, "R_trunc must not exceed r_max / 2");
  if (nodes < 10) fail(ErrorCode::Domain, "too few nodes");
  const int N = nodes;
  const double h = R / N;
  const double m = mp.n - 1.0;
  // Weight J (1+Q'^2) and potential J V, integrated over each cell with
  // three-point Gauss; flux coefficients J at cell faces.
  auto Jg = [&](double r, double& weight, double& pot) {
    const ProfileJet j = mp.jet_at(r);
    const double g = 1 + j.q1 * j.q1;
    const double J = std::pow(r * j.q, m) / std::sqrt(g);
    const double k = j.q2 / g;
    weight = J * g;
    pot = J * (k * k + m * j.q1 * j.q1 / (r * r) + m / (j.q * j.q));
  };
  auto Jface = [&](double r) {
    const ProfileJet j = mp.jet_at(r);
    return std::pow(r * j.q, m) / std::hypot(1.0, j.q1);
  };
  const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
  std::vector<double> M(N), K(N), F(N);
  for (int i = 0; i < N; ++i) {
    const double a = std::max(0.0, (i - 0.5) * h), b = (i + 0.5) * h;
    double mi = 0, ki = 0;
    for (int q = 0; q < 3; ++q) {
      double w, p;
      Jg(0.5 * (a + b) + 0.5 * (b - a) * gx[q], w, p);
      mi += 0.5 * (b - a) * gw[q] * w;
      ki += 0.5 * (b - a) * gw[q] * p;
    }
    M[i] = mi;
    K[i] = ki;
    F[i] = Jface(b) / h;
  }
  std::vector<double> diag(N), off(N - 1);
  for (int i = 0; i < N; ++i) {
    diag[i] = (-F[i] - (i > 0 ? F[i - 1] : 0.0) + K[i]) / M[i];
    if (i + 1 < N) off[i] = F[i] / std::sqrt(M[i] * M[i + 1]);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < N; ++i) {
    const double rad = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < N ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - rad);
    hi = std::max(hi, diag[i] + rad);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  for (int it = 0; it < 200 && hi - lo > 1e-15 * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_eigenvalues_above(diag, off, mid) >= 1)
      lo = mid;
    else
      hi = mid;
  }
  // Shifted inverse iteration just above the bracketed eigenvalue.
  const double shift = hi + 1e-9 * std::max(1.0, std::abs(hi));
  std::vector<double> sub(off), sup(off), dshift(N), x(N, 1.0);
  for (int i = 0; i < N; ++i) dshift[i] = diag[i] - shift;
  Spectrum sp;
  double lambda = hi;
  bool converged = false;
  for (int it = 1; it <= 50 && !converged; ++it) {
    std::vector<double> y = solve_tridiagonal(sub, dshift, sup, x);
    double nrm = 0;
    for (double v : y) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (int i = 0; i < N; ++i) x[i] = y[i] / nrm;
    // Rayleigh quotient and residual.
    double rq = 0, res = 0;
    std::vector<double> Sx(N);
    for (int i = 0; i < N; ++i) {
      Sx[i] = diag[i] * x[i] + (i > 0 ? off[i - 1] * x[i - 1] : 0.0) + (i + 1 < N ? off[i] * x[i + 1] : 0.0);
      rq += x[i] * Sx[i];
    }
    for (int i = 0; i < N; ++i) res += (Sx[i] - rq * x[i]) * (Sx[i] - rq * x[i]);
    lambda = rq;
    sp.iterations = it;
    converged = std::sqrt(res) <= 1e-9 * scale;
  }
  if (!converged) fail(ErrorCode::NonConvergence, "inverse iteration did not converge");
  sp.top = lambda;
  sp.r.resize(N);
  sp.mode.resize(N);
  for (int i = 0; i < N; ++i) {
    sp.r[i] = i * h;
    sp.mode[i] = x[i] / std::sqrt(M[i]);
  }
  return sp;
}

double u0_rayleigh_quotient(const MinimalProfile& mp, double R) {
  const double a = R / 2, b = R;
  // C^1 smoothstep cutoff.
  auto chi = [&](double r, double& d) {
    if (r <= a) {
      d = 0;
      return 1.0;
    }
    if (r >= b) {
      d = 0;
      return 0.0;
    }
    const double s = (r - a) / (b - a);
    d = -6 * s * (1 - s) / (b - a);
    return 1 - s * s * (3 - 2 * s);
  };
  auto num = [&](double r) {
    if (r == 0.0) return 0.0;
    const JacobiCoeffs c = jacobi_coeffs(mp, r);
    double d;
    const double x = chi(r, d);
    const double u = c.u0 * x, u1 = c.u0_1 * x + c.u0 * d;
    return c.J * (c.V * u * u - u1 * u1);
  };
  auto den = [&](double r) {
    if (r == 0.0) return 0.0;
    const JacobiCoeffs c = jacobi_coeffs(mp, r);
    double d;
    const double u = c.u0 * chi(r, d);
    return c.J * c.g * u * u;
  };
  const double br[] = {mp.b, a};
  return integrate_with_breaks(num, 0.0, b, br, 1e-12).value / integrate_with_breaks(den, 0.0, b, br, 1e-12).value;
}

}  // namespace mcf
