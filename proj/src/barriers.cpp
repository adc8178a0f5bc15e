#include "mcf/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mcf/errors.hpp"
#include "mcf/geometry.hpp"

namespace mcf {

double monomial_coefficient(int n, double m, double a) { return a * m * (m - 1) + (n - 1) * m + (n - 1); }

double supersolution_bracket(const Params& p) { return monomial_coefficient(p.n, 2 * p.lambda_k + 1, 1.0); }

Supersolution supersolution(const Params& p, double C0) {
  if (!(C0 > 0)) fail(ErrorCode::Domain, "C0 must be positive");
  return Supersolution{p, C0, supersolution_bracket(p) * C0};
}

double Supersolution::operator()(double r, double t) const {
  const double l = p.lambda_k;
  return C0 * std::pow(r, 2 * l + 1) - C1 * (p.T - t) * std::pow(r, 2 * l - 1);
}

double Supersolution::positivity_radius(double t) const { return std::sqrt(C1 / C0 * (p.T - t)); }

double supersolution_residual_at(const Supersolution& s, double r, double t, double a) {
  const int n = s.p.n;
  const double l = s.p.lambda_k, tau = s.p.T - t;
  // d_t v+ = C1 r^{2l-1}; each monomial contributes its own coefficient.
  const double lead = s.C1 - s.C0 * monomial_coefficient(n, 2 * l + 1, a);
  const double low = s.C1 * tau * monomial_coefficient(n, 2 * l - 1, a) / (r * r);
  return (lead + low) * std::pow(r, 2 * l - 1);
}

ResidualReport supersolution_residual(const Supersolution& s, double Qr_bound,
                                      std::span<const SpaceTimeSample> samples) {
  if (!(Qr_bound >= 1)) fail(ErrorCode::Domain, "gradient bound must be >= 1");
  ResidualReport rep;
  rep.min_residual = std::numeric_limits<double>::infinity();
  const double as[] = {1 / (1 + Qr_bound * Qr_bound), 1.0};
  for (const auto& x : samples) {
    if (!(x.t < s.p.T) || !s.valid(x.r, x.t))
      fail(ErrorCode::SampleOutsideValidity,
           "sample (r=" + std::to_string(x.r) + ", t=" + std::to_string(x.t) + ") lies where v+ <= 0");
    for (double a : as) {
      const double res = supersolution_residual_at(s, x.r, x.t, a);
      ++rep.evaluated;
      if (res < rep.min_residual) {
        rep.min_residual = res;
        rep.argmin = x;
        rep.a_at_min = a;
      }
    }
  }
  return rep;
}

std::vector<SpaceTimeSample> sample_validity_region(const Supersolution& s, double Gamma, std::size_t count,
                                                   std::uint64_t seed, double spread) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<SpaceTimeSample> out;
  out.reserve(count);
  const double T = s.p.T;
  while (out.size() < count) {
    const double t = T * U(rng);
    if (!(t < T)) continue;
    const double lo = std::max(Gamma * std::sqrt(T - t), s.positivity_radius(t) * (1 + 1e-9));
    if (!(lo > 0)) continue;
    const double r = lo * std::pow(spread, U(rng));
    if (s.valid(r, t)) out.push_back({r, t});
  }
  return out;
}

double gamma_threshold(const Supersolution& s, double Cbar) {
  if (s.C0 <= Cbar) return std::numeric_limits<double>::infinity();
  return std::sqrt(s.C1 / (s.C0 - Cbar));
}

ThresholdReport gamma_threshold_check(const Supersolution& s, double Cbar, double Gamma, std::size_t count,
                                      std::uint64_t seed) {
  if (Cbar < 0) fail(ErrorCode::Domain, "Cbar must be nonnegative");
  ThresholdReport rep;
  rep.gamma = Gamma;
  rep.hypothesis = s.C0 - Cbar >= s.C1 / (Gamma * Gamma);
  rep.min_margin = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double T = s.p.T, l = s.p.lambda_k;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = T * U(rng);
    // Half the samples sit exactly on r = Gamma sqrt(T - t), where the margin is smallest.
    const double r = Gamma * std::sqrt(T - t) * (i % 2 == 0 ? 1.0 : std::pow(100.0, U(rng)));
    if (!(r > 0)) continue;
    const double margin = s(r, t) / std::pow(r, 2 * l + 1) - Cbar;
    rep.min_margin = std::min(rep.min_margin, margin);
    if (margin < -1e-12 * s.C0) ++rep.violations;
    ++rep.count;
  }
  return rep;
}

ConvexityReport convexity_reduction_check(std::span<const double> v, std::span<const double> r) {
  if (v.size() != r.size()) fail(ErrorCode::GridMismatch, "v and r sample counts differ");
  ConvexityReport rep;
  rep.min_direct = rep.min_closed = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0) || !(r[i] > 0)) fail(ErrorCode::Domain, "convexity check needs v >= 0 and r > 0");
    const double x = v[i] / r[i];
    const double direct = 1 / (1 + x) - 1 + x;
    const double closed = x * x / (1 + x);
    rep.min_direct = std::min(rep.min_direct, direct);
    rep.min_closed = std::min(rep.min_closed, closed);
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(direct - closed));
    const double slack = 4 * std::numeric_limits<double>::epsilon() * (1 + x);
    if (closed < 0 || direct < -slack) rep.holds = false;
    ++rep.count;
  }
  return rep;
}

namespace {

// Linear interpolation of sampled values at radius x (x inside the grid).
double lerp_at(const std::vector<double>& r, const std::vector<double>& f, double x) {
  const auto it = std::upper_bound(r.begin(), r.end(), x);
  const std::size_t i = std::clamp<std::size_t>(it - r.begin(), 1, r.size() - 1);
  const double th = (x - r[i - 1]) / (r[i] - r[i - 1]);
  return (1 - th) * f[i - 1] + th * f[i];
}

}  // namespace

GradientBoundReport gradient_bound_check(const std::vector<ProfileState>& snapshots, const OverlapWindow& w) {
  if (snapshots.empty()) fail(ErrorCode::Domain, "no snapshots");
  GradientBoundReport rep;
  rep.min_Q_minus_r = std::numeric_limits<double>::infinity();
  const double T = w.T, r_out = w.Upsilon * std::sqrt(T);
  const double t0 = snapshots.front().t;
  for (const auto& s : snapshots) {
    if (!(s.t < T)) continue;
    const double r_in = w.Gamma * std::sqrt(T - s.t);
    if (s.grid.front() > r_in || s.grid.back() < r_out)
      fail(ErrorCode::Domain, "snapshot grid does not cover the overlap region");
    const auto jets = finite_difference_jets(s.grid, s.Q);
    std::vector<double> qr(jets.size());
    for (std::size_t i = 0; i < jets.size(); ++i) qr[i] = jets[i].q1;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      const double r = s.grid[i];
      if (r < r_in || r > r_out) continue;
      rep.min_Q_minus_r = std::min(rep.min_Q_minus_r, s.Q[i] - r);
      if (s.t == t0)
        rep.boundary_max = std::max(rep.boundary_max, std::abs(qr[i]));
      else if (r > r_in && r < r_out)
        rep.interior_max = std::max(rep.interior_max, std::abs(qr[i]));
    }
    rep.boundary_max = std::max({rep.boundary_max, std::abs(lerp_at(s.grid, qr, r_in)),
                                 std::abs(lerp_at(s.grid, qr, r_out))});
    ++rep.slices;
  }
  // Roundoff slack: the cone itself sits exactly on Q = r.
  if (rep.min_Q_minus_r < -1e-12 * std::max(1.0, r_out))
    fail(ErrorCode::ConePrerequisiteFailed,
         "Q < r on the overlap region (min Q - r = " + std::to_string(rep.min_Q_minus_r) + ")");
  return rep;
}

double h_chain(int n, double r, double v, double v_r, double v_rr) {
  return std::abs(v_rr) + (n - 1) * std::abs(v_r) / r + (n - 1) / r * std::abs(1 / (1 + v / r) - 1);
}

HBoundReport h_bound_report(const std::vector<ProfileState>& snapshots, const Params& p, const OverlapWindow& w,
                            double C0) {
  const int n = p.n;
  const double T = w.T, l = p.lambda_k;
  HBoundReport rep;
  for (const auto& s : snapshots) {
    if (!(s.t < T)) continue;
    const double r_lo = w.Gamma * std::sqrt(T - s.t);
    const auto jets = finite_difference_jets(s.grid, s.Q);
    const bool in_window = s.t > 15.0 / 16.0 * T;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      const double r = s.grid[i];
      if (r < r_lo || r == 0.0) continue;
      const double v = s.Q[i] - r;
      if (v < -1e-12 * std::max(1.0, r))
        fail(ErrorCode::HypothesisFailed, "v >= 0 fails at r = " + std::to_string(r) + ", t = " + std::to_string(s.t));
      if (v > C0 * std::pow(r, 2 * l + 1))
        fail(ErrorCode::HypothesisFailed,
             "v <= C0 r^(2 lambda + 1) fails at r = " + std::to_string(r) + ", t = " + std::to_string(s.t));
      rep.M = std::max(rep.M, std::abs(jets[i].q1));
      if (!in_window || r <= 2 * std::sqrt(2.0) * r_lo || r >= w.Gamma * std::sqrt(T)) continue;
      const double v_r = jets[i].q1 - 1, v_rr = jets[i].q2;
      const double H = std::abs(curvature(n, jets[i]).H);
      const double t1 = std::abs(v_rr), t2 = (n - 1) * std::abs(v_r) / r;
      const double t3 = (n - 1) / r * std::abs(1 / (1 + v / r) - 1);
      rep.sup_H = std::max(rep.sup_H, H);
      rep.sup_vrr = std::max(rep.sup_vrr, t1);
      rep.sup_vr_term = std::max(rep.sup_vr_term, t2);
      rep.sup_lip_term = std::max(rep.sup_lip_term, t3);
      rep.sup_chain = std::max(rep.sup_chain, t1 + t2 + t3);
      if (H > (t1 + t2 + t3) * (1 + 1e-12) + 1e-14) rep.chain_dominates = false;
      ++rep.points;
    }
    if (in_window) ++rep.slices;
  }
  if (rep.points == 0) fail(ErrorCode::HypothesisFailed, "no samples inside the overlap window 15T/16 < t < T");
  return rep;
}

}  // namespace mcf
