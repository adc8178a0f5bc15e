#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcf/flow.hpp"
#include "mcf/params.hpp"

namespace mcf {

/// v+(r,t) = C0 r^{2 lambda + 1} - C1 (T - t) r^{2 lambda - 1}, a
/// supersolution of the perturbation equation wherever it is positive.
struct Supersolution {
  Params p;
  double C0 = 1.0;
  double C1 = 0.0;

  double lambda() const { return p.lambda_k; }
  double operator()(double r, double t) const;
  /// Radius beyond which v+ > 0: sqrt(C1/C0 (T - t)).
  double positivity_radius(double t) const;
  bool valid(double r, double t) const { return r > positivity_radius(t); }
};

/// a m (m-1) + (n-1) m + (n-1): the coefficient of r^{m-2} in
/// a (r^m)'' + (n-1)/r (r^m)' + (n-1)/r^2 r^m.
double monomial_coefficient(int n, double m, double a);

/// C1 / C0 = (2l+1)(2l) + (n-1)(2l+1) + (n-1).
double supersolution_bracket(const Params& p);

Supersolution supersolution(const Params& p, double C0);

struct SpaceTimeSample {
  double r = 0.0;
  double t = 0.0;
};

struct ResidualReport {
  double min_residual = 0.0;
  SpaceTimeSample argmin;
  double a_at_min = 1.0;
  std::size_t evaluated = 0;
};

/// d_t v+ - (a v+_rr + (n-1)/r v+_r + (n-1)/r^2 v+) at one point.
double supersolution_residual_at(const Supersolution& s, double r, double t, double a);

/// Minimum residual over the samples with a swept over {1/(1+M^2), 1}.
/// Throws SampleOutsideValidity for samples where v+ <= 0, Domain for M < 1.
ResidualReport supersolution_residual(const Supersolution& s, double Qr_bound,
                                      std::span<const SpaceTimeSample> samples);

/// Random samples with t in [0, T) and r log-uniform between
/// max(Gamma sqrt(T - t), positivity radius) and `spread` times that.
std::vector<SpaceTimeSample> sample_validity_region(const Supersolution& s, double Gamma, std::size_t count,
                                                   std::uint64_t seed, double spread = 1e3);

/// Smallest Gamma with C0 - Cbar >= C1 / Gamma^2 (infinite if C0 <= Cbar).
double gamma_threshold(const Supersolution& s, double Cbar);

struct ThresholdReport {
  double gamma = 0.0;
  bool hypothesis = false;     // C0 - Cbar >= C1 / Gamma^2
  double min_margin = 0.0;     // min (v+ - Cbar r^{2l+1}) / r^{2l+1} over samples
  std::size_t violations = 0;  // samples with a negative margin beyond roundoff
  std::size_t count = 0;
};

/// Samples r >= Gamma sqrt(T - t) and checks v+ >= Cbar r^{2 lambda + 1}.
ThresholdReport gamma_threshold_check(const Supersolution& s, double Cbar, double Gamma, std::size_t count,
                                      std::uint64_t seed);

struct ConvexityReport {
  std::size_t count = 0;
  double min_direct = 0.0;    // min of 1/(1+x) - 1 + x as evaluated
  double min_closed = 0.0;    // min of x^2/(1+x)
  double max_discrepancy = 0.0;
  bool holds = true;
};

/// Checks 1/(1 + v/r) - 1 + v/r >= 0 for v >= 0 (negative values beyond
/// a few ulps of cancellation count as failures). Throws Domain for v < 0 or r <= 0.
ConvexityReport convexity_reduction_check(std::span<const double> v, std::span<const double> r);

struct OverlapWindow {
  double Gamma = 10.0;
  double Upsilon = 20.0;
  double T = 1.0;
};

struct GradientBoundReport {
  double interior_max = 0.0;
  double boundary_max = 0.0;
  double min_Q_minus_r = 0.0;
  std::size_t slices = 0;
};

/// Max |Q_r| inside Omega = {Gamma sqrt(T-t) < r < Upsilon sqrt(T)} and on
/// its parabolic boundary, from snapshots with t < T. Throws
/// ConePrerequisiteFailed if Q < r somewhere on Omega.
GradientBoundReport gradient_bound_check(const std::vector<ProfileState>& snapshots, const OverlapWindow& w);

struct HBoundReport {
  double sup_H = 0.0;
  double sup_vrr = 0.0;       // |v_rr|
  double sup_vr_term = 0.0;   // (n-1)|v_r|/r
  double sup_lip_term = 0.0;  // (n-1)/r |1/(1+v/r) - 1|
  double sup_chain = 0.0;     // pointwise sum of the three
  double M = 0.0;             // sup |Q_r| over r >= Gamma sqrt(T-t)
  bool chain_dominates = true;
  std::size_t points = 0;
  std::size_t slices = 0;
};

/// |v_rr| + (n-1)|v_r|/r + (n-1)/r |1/(1+v/r) - 1|.
double h_chain(int n, double r, double v, double v_r, double v_rr);

/// Empirical sup |H| over 15T/16 < t < T, 2 sqrt(2) Gamma sqrt(T-t) < r <
/// Gamma sqrt(T), after checking 0 <= v <= C0 r^{2 lambda + 1} on
/// r >= Gamma sqrt(T-t) for every snapshot (HypothesisFailed otherwise).
HBoundReport h_bound_report(const std::vector<ProfileState>& snapshots, const Params& p, const OverlapWindow& w,
                            double C0);

}  // namespace mcf
