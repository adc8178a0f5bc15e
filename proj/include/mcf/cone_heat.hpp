#pragma once

#include <functional>
#include <vector>

#include "mcf/numerics/fit.hpp"
#include "mcf/params.hpp"

namespace mcf {

/// Modified Bessel function of the first kind I_mu(z), or e^{-z} I_mu(z)
/// when scaled. Power series for z <= 15, large-argument asymptotic
/// expansion beyond; the series is kept wherever the asymptotic expansion
/// cannot reach full precision (large mu relative to z). Unscaled values are
/// only representable for z <= 700.
double bessel_I(double mu, double z, bool scaled);

// The two regimes, exposed so their agreement can be checked.
double bessel_I_scaled_series(double mu, double z);
double bessel_I_scaled_asymptotic(double mu, double z);

inline constexpr double kBesselSwitch = 15.0;

/// W_t^mu(r, rho) = (sqrt(r rho)/2t) I_mu(r rho/2t) e^{-(r^2+rho^2)/4t},
/// evaluated as (sqrt(r rho)/2t) [e^{-z} I_mu(z)] e^{-(r-rho)^2/4t}.
double heat_kernel(double mu, double t, double r, double rho);

/// Radial field v(rho) sampled on increasing radii, with the log-log slope of
/// its tail recorded as a decay tag.
struct HalfLineField {
  std::vector<double> grid;
  std::vector<double> v;
  double t = 0.0;
  double tail_exponent = 0.0;

  /// Cubic spline in log rho inside the grid; power laws outside.
  double operator()(double rho) const;
};

/// Fits the tail exponent over the last decade of the grid (0 for a zero field).
double fit_tail_exponent(const std::vector<double>& grid, const std::vector<double>& v);

HalfLineField make_field(std::vector<double> grid, std::vector<double> v, double t = 0.0);

struct PropagateOptions {
  double rel_tol = 1e-10;
  double width = 40.0;  // truncation at rho = r + width sqrt(t), or width/4 sqrt(t) if larger
};

/// v(r, t0 + t) = int_0^inf W_t^mu(r, rho) v0(rho) drho at each output radius.
/// The tail exponent of v0 must not exceed mu + 1/2 (throws TailTooFat).
std::vector<double> propagate(double mu, double t, const std::function<double(double)>& v0,
                              double tail_exponent, const std::vector<double>& r_out,
                              const PropagateOptions& opt = {});

HalfLineField propagate(double mu, double t, const HalfLineField& v0, const PropagateOptions& opt = {});

/// Truncation error bound of the Gaussian tail beyond the quadrature window
/// for data bounded by C rho^p.
double truncation_bound(double mu, double t, double r, double p, double C, double width = 40.0);

struct DecayExperiment {
  std::vector<double> times;
  std::vector<double> sup_ratio;  // sup_r v(r, t) / r^{mu+1/2}
  RateFit fit;
  double expected = 0.0;          // -delta/2
};

/// Propagates v0 = rho^{mu+1/2-delta} and fits log sup_r v/r^{mu+1/2}
/// against log t.
DecayExperiment decay_experiment(const Params& p, double delta, const std::vector<double>& t_grid);

/// Default radii used for the sup in decay_experiment.
std::vector<double> decay_radii();

/// v = r^{n-1} u with the time relabelling t_v = t_u / 2, and its inverse.
HalfLineField cone_transform(int n, const std::vector<double>& r, const std::vector<double>& u, double t_u);
std::vector<double> cone_transform_inverse(int n, const HalfLineField& v, double& t_u);

/// max_z I_mu(z) (1+z)^{mu+1/2} / (z^mu e^z) over z in [z_lo, z_hi]: the
/// constant in the shape bound I_mu(z) <= C z^mu e^z / (1+z)^{mu+1/2}.
double bessel_bound_constant(double mu, double z_lo = 1e-6, double z_hi = 1e6);

}  // namespace mcf
