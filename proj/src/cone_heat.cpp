#include "mcf/cone_heat.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "mcf/errors.hpp"
#include "mcf/numerics/grid.hpp"
#include "mcf/numerics/interp.hpp"
#include "mcf/numerics/parallel.hpp"
#include "mcf/numerics/quadrature.hpp"

namespace mcf {

double bessel_I_scaled_series(double mu, double z) {
  if (z == 0.0) return mu == 0.0 ? 1.0 : 0.0;
  // Terms are carried relative to the leading one and rescaled before they
  // overflow, so the sum is usable for any z.
  const double x = 0.25 * z * z;
  const double log_lead = mu * std::log(0.5 * z) - std::lgamma(mu + 1.0) - z;
  double term = 1.0, sum = 1.0, log_scale = 0.0;
  for (long k = 1; k < 10'000'000; ++k) {
    term *= x / (k * (k + mu));
    sum += term;
    if (sum > 1e280) {
      sum *= 1e-280;
      term *= 1e-280;
      log_scale += 280.0 * std::numbers::ln10;
    }
    if (k > z && term < 1e-17 * sum) break;
  }
  return sum * std::exp(log_lead + log_scale);
}

namespace {

// Hankel expansion of e^{-z} I_mu(z); reports whether the smallest term
// reached the requested relative size before the series turned.
double hankel_scaled(double mu, double z, double target, bool& converged) {
  const double m4 = 4.0 * mu * mu;
  double term = 1.0, sum = 1.0;
  converged = false;
  for (int k = 1; k < 400; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (m4 - odd * odd) / (8.0 * k * z);
    if (next == 0.0) {
      converged = true;
      break;
    }
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < target * std::abs(sum)) {
      converged = true;
      break;
    }
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace

double bessel_I_scaled_asymptotic(double mu, double z) {
  bool converged = false;
  return hankel_scaled(mu, z, 1e-17, converged);
}

double bessel_I(double mu, double z, bool scaled) {
  if (z < 0) fail(ErrorCode::Domain, "bessel_I needs z >= 0");
  double s = 0.0;
  bool converged = false;
  if (z > kBesselSwitch) s = hankel_scaled(mu, z, 1e-16, converged);
  if (!converged) s = bessel_I_scaled_series(mu, z);
  return scaled ? s : s * std::exp(z);
}

double heat_kernel(double mu, double t, double r, double rho) {
  if (!(t > 0)) fail(ErrorCode::Domain, "heat kernel needs t > 0");
  if (r <= 0 || rho <= 0) return 0.0;
  const double z = r * rho / (2.0 * t);
  const double d = r - rho;
  return std::sqrt(r * rho) / (2.0 * t) * bessel_I(mu, z, true) * std::exp(-d * d / (4.0 * t));
}

double fit_tail_exponent(const std::vector<double>& grid, const std::vector<double>& v) {
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) return 0.0;
  const double hi = grid.back();
  return fit_loglog(grid, v, hi / 10.0, hi, 3).exponent;
}

HalfLineField make_field(std::vector<double> grid, std::vector<double> v, double t) {
  if (grid.size() != v.size() || grid.size() < 4) fail(ErrorCode::GridMismatch, "field needs >= 4 samples");
  HalfLineField f;
  f.tail_exponent = fit_tail_exponent(grid, v);
  f.grid = std::move(grid);
  f.v = std::move(v);
  f.t = t;
  return f;
}

namespace {

std::function<double(double)> interpolator(const HalfLineField& f) {
  std::vector<double> x(f.grid.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::log(f.grid[i]);
  double p0 = 0.0;
  if (f.v[0] != 0.0 && f.v[1] != 0.0 && (f.v[0] > 0) == (f.v[1] > 0))
    p0 = std::log(f.v[1] / f.v[0]) / (x[1] - x[0]);
  const double r0 = f.grid.front(), v0 = f.v.front();
  const double rN = f.grid.back(), vN = f.v.back(), pN = f.tail_exponent;
  // End slopes match the power-law extensions, so the field is C^1 across the grid ends.
  auto spline = std::make_shared<CubicSpline>(x, f.v, p0 * v0, pN * vN);
  return [spline, p0, r0, v0, rN, vN, pN](double rho) {
    if (rho <= 0) return 0.0;
    if (rho < r0) return v0 * std::pow(rho / r0, p0);
    if (rho > rN) return vN * std::pow(rho / rN, pN);
    return (*spline)(std::log(rho));
  };
}

}  // namespace

double HalfLineField::operator()(double rho) const { return interpolator(*this)(rho); }

double truncation_bound(double mu, double t, double r, double p, double C, double width) {
  (void)mu;  // e^{-z} I_mu(z) <= 1 for mu >= 0 removes the order dependence
  const double L = width * std::sqrt(t);
  auto bound = [&](double rho) {
    const double d = rho - r;
    return std::sqrt(r * rho) / (2.0 * t) * C * std::pow(rho, p) * std::exp(-d * d / (4.0 * t));
  };
  double total = integrate(bound, r + L, r + L + 100.0 * std::sqrt(t), 1e-6).value;
  if (r > L) total += integrate(bound, 0.0, r - L, 1e-6).value;
  return total;
}

std::vector<double> propagate(double mu, double t, const std::function<double(double)>& v0,
                              double tail_exponent, const std::vector<double>& r_out,
                              const PropagateOptions& opt) {
  if (!(t > 0)) fail(ErrorCode::Domain, "propagation time must be positive");
  if (tail_exponent > mu + 0.5 + 1e-8)
    fail(ErrorCode::TailTooFat, "tail exponent " + std::to_string(tail_exponent) + " exceeds mu + 1/2 = " +
                                    std::to_string(mu + 0.5));
  const double st = std::sqrt(t);
  std::vector<double> out(r_out.size(), 0.0);
  parallel_for(r_out.size(), [&](std::size_t i) {
    const double r = r_out[i];
    if (r <= 0) return;
    const double a = std::max(0.0, r - opt.width * st);
    const double b = std::max(r + opt.width * st, 0.25 * opt.width * st);
    auto integrand = [&](double rho) {
      if (rho <= 0) return 0.0;
      return heat_kernel(mu, t, r, rho) * v0(rho);
    };
    const double breaks[] = {r - 5 * st, r - st, r, r + st, r + 5 * st};
    out[i] = integrate_with_breaks(integrand, a, b, breaks, opt.rel_tol).value;
  });
  return out;
}

HalfLineField propagate(double mu, double t, const HalfLineField& v0, const PropagateOptions& opt) {
  const auto f = interpolator(v0);
  auto v = propagate(mu, t, f, v0.tail_exponent, v0.grid, opt);
  HalfLineField out = make_field(v0.grid, std::move(v), v0.t + t);
  // Heat flow cannot fatten the tail; round the fitted tag down to the input.
  out.tail_exponent = std::min(out.tail_exponent, v0.tail_exponent);
  return out;
}

std::vector<double> decay_radii() { return geometric_grid(1e-2, 1e3, 20.0); }

DecayExperiment decay_experiment(const Params& p, double delta, const std::vector<double>& t_grid) {
  const double mu = p.mu;
  if (!(delta > 0 && delta < 2 * mu + 2)) fail(ErrorCode::Domain, "delta must lie in (0, 2 mu + 2)");
  const double e = mu + 0.5 - delta;
  auto v0 = [e](double rho) { return std::pow(rho, e); };
  const auto radii = decay_radii();
  DecayExperiment ex;
  ex.expected = -delta / 2;
  ex.times = t_grid;
  for (double t : t_grid) {
    const auto v = propagate(mu, t, v0, e, radii);
    double sup = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) sup = std::max(sup, v[i] / std::pow(radii[i], mu + 0.5));
    ex.sup_ratio.push_back(sup);
  }
  ex.fit = fit_loglog(ex.times, ex.sup_ratio, t_grid.front(), t_grid.back(), 3);
  return ex;
}

HalfLineField cone_transform(int n, const std::vector<double>& r, const std::vector<double>& u, double t_u) {
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = std::pow(r[i], n - 1.0) * u[i];
  return make_field(r, std::move(v), t_u / 2);
}

std::vector<double> cone_transform_inverse(int n, const HalfLineField& f, double& t_u) {
  std::vector<double> u(f.v.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = f.v[i] / std::pow(f.grid[i], n - 1.0);
  t_u = 2 * f.t;
  return u;
}

double bessel_bound_constant(double mu, double z_lo, double z_hi) {
  double best = 0.0;
  for (double z : geometric_grid(z_lo, z_hi, 40.0)) {
    const double c = bessel_I(mu, z, true) * std::pow(1.0 + z, mu + 0.5) / std::pow(z, mu);
    best = std::max(best, c);
  }
  return best;
}

}  // namespace mcf
