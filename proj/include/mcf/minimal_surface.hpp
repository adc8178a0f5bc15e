#pragma once

#include <vector>

#include "mcf/geometry.hpp"

namespace mcf {

/// Sampled minimal profile Q_b with Q_b(0) = b, asymptotic to the Simons
/// cone. w = Q - r and w1 = Q' - 1 are kept alongside q, q1 because the
/// tail quantities are differences of nearly equal numbers.
struct MinimalProfile {
  int n = 4;
  double b = 1.0;
  double r_max = 0.0;
  double tol = 0.0;
  std::vector<double> grid;
  std::vector<double> q, q1, q2;
  std::vector<double> w, w1;
  double C_b = 0.0;
  double alpha_fit = 0.0;
  double tail_resid = 0.0;
  double ode_residual = 0.0;  // sup of the scaled defect of the dense output
  double seed_residual = 0.0;
  long steps = 0;

  std::size_t size() const { return grid.size(); }
  ProfileJet jet(std::size_t i) const { return {grid[i], q[i], q1[i], q2[i]}; }

  /// Jet at an arbitrary radius: quintic Hermite inside the grid, the fitted
  /// tail r + C_b r^alpha beyond r_max.
  ProfileJet jet_at(double r) const;
  /// Q - r at an arbitrary radius without cancellation.
  double w_at(double r) const;
};

struct MinimalOptions {
  double per_decade = 200.0;  // output nodes per decade of r
  double r_first = 1e-3;      // first nonzero output node, in units of b
  double seed_fraction = 1e-2;  // series seed used on [0, seed_fraction * b]
};

/// Shoots Q'' = (1+Q'^2)(n-1)(1/Q - Q'/r) from the axis.
MinimalProfile integrate_profile(int n, double b, double r_max, double tol,
                                 const MinimalOptions& opt = {});

/// Even power-series coefficients c_j of Q_b = sum c_j r^{2j} about the axis.
std::vector<double> axis_series(int n, double b, int terms);

/// Right side of the minimal-surface ODE and its total r-derivative along a
/// solution (i.e. Q'' and Q''' from Q, Q').
double minimal_q2(int n, double r, double q, double q1);
double minimal_q3(int n, const ProfileJet& jet);

struct TailFit {
  double C_b = 0.0;
  double alpha_fit = 0.0;
  double resid = 0.0;
  int points = 0;
};

/// Log-log least squares of Q - r against r over [r_lo, r_hi].
TailFit fit_tail(const MinimalProfile& mp, double r_lo, double r_hi);

/// Default window used by integrate_profile: [20 b, 0.8 r_max].
TailFit fit_tail(const MinimalProfile& mp);

/// sup |Q_b(r) - b Q_1(r/b)| over the common range.
double verify_scaling(const MinimalProfile& mp1, const MinimalProfile& mpb);

/// u0 = (Q - r Q')/sqrt(1 + Q'^2) at every node; throws PositivityViolated
/// if any sample is not positive.
std::vector<double> u0_profile(const MinimalProfile& mp);

/// u0 and its first two derivatives at an arbitrary radius.
FunctionJet u0_jet(const MinimalProfile& mp, double r);

struct U0Tail {
  double exponent = 0.0;
  double coefficient = 0.0;
  double predicted_coefficient = 0.0;  // (1 - alpha) C_b / sqrt(2)
  double resid = 0.0;
};

U0Tail fit_u0_tail(const MinimalProfile& mp, double r_lo, double r_hi);

}  // namespace mcf
