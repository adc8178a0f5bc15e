#include "mcf/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "mcf/errors.hpp"
#include "mcf/numerics/fd.hpp"

namespace mcf {

CurvatureData curvature(int n, const ProfileJet& jet) {
  if (!(jet.q > 0)) fail(ErrorCode::Domain, "profile value must be positive");
  if (jet.r < 0) fail(ErrorCode::Domain, "negative radius");
  if (jet.r == 0 && jet.q1 != 0) fail(ErrorCode::Axis, "Q'(0) must vanish at the axis");
  const double m = n - 1.0;
  const double g = 1.0 + jet.q1 * jet.q1;
  const double s = std::sqrt(g);
  CurvatureData c;
  c.g_rr = g;
  c.a_rr = jet.q2 / s;
  if (jet.r > 0) {
    c.g_omega = jet.r * jet.r;
    c.a_omega = jet.r * jet.q1 / s;
  } else {
    c.g_omega = 1.0;
    c.a_omega = jet.q2;
  }
  c.g_theta = jet.q * jet.q;
  c.a_theta = -jet.q / s;
  const double kr = jet.q2 / (g * s);
  const double ko = jet.r > 0 ? jet.q1 / (jet.r * s) : jet.q2;
  const double kt = -1.0 / (jet.q * s);
  c.H = kr + m * (ko + kt);
  c.A2 = kr * kr + m * (ko * ko + kt * kt);
  return c;
}

double trace_from_entries(int n, const CurvatureData& c) {
  return c.a_rr / c.g_rr + (n - 1.0) * (c.a_omega / c.g_omega + c.a_theta / c.g_theta);
}

UnitNormal unit_normal(const ProfileJet& jet) {
  const double s = std::hypot(1.0, jet.q1);
  return {-jet.q1 / s, 1.0 / s};
}

double normal_position(const ProfileJet& jet) {
  return (jet.q - jet.r * jet.q1) / std::hypot(1.0, jet.q1);
}

double laplace_beltrami_radial(int n, const ProfileJet& jet, const FunctionJet& u) {
  const double m = n - 1.0;
  const double g = 1.0 + jet.q1 * jet.q1;
  const double radial = jet.r > 0 ? m * u.u1 / jet.r : m * u.u2;
  return (u.u2 + radial - jet.q1 * jet.q2 * u.u1 / g + m * jet.q1 * u.u1 / jet.q) / g;
}

double laplace_beltrami_minimal(int n, const ProfileJet& jet, const FunctionJet& u) {
  const double m = n - 1.0;
  const double radial = jet.r > 0 ? m * u.u1 / jet.r : m * u.u2;
  return u.u2 / (1.0 + jet.q1 * jet.q1) + radial;
}

std::vector<ProfileJet> finite_difference_jets(std::span<const double> r, std::span<const double> q) {
  const std::size_t n = r.size();
  if (q.size() != n || n < 3) fail(ErrorCode::GridMismatch, "need at least 3 matching samples");
  std::vector<ProfileJet> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    ProfileJet& j = out[i];
    j.r = r[i];
    j.q = q[i];
    if (i == 0 && r[0] == 0.0) {
      const double h = r[1];
      j.q1 = 0.0;
      j.q2 = 2.0 * (q[1] - q[0]) / (h * h);
      continue;
    }
    // Centered three-point stencil inside; four points one-sided at the ends
    // so that the second derivative stays second-order.
    std::size_t s, m;
    if (i == 0) {
      s = 0;
      m = std::min<std::size_t>(4, n);
    } else if (i == n - 1) {
      m = std::min<std::size_t>(4, n);
      s = n - m;
    } else {
      s = i - 1;
      m = 3;
    }
    const auto w = fd_weights(r[i], r.subspan(s, m), 2);
    j.q1 = 0.0;
    j.q2 = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      j.q1 += w[1][k] * q[s + k];
      j.q2 += w[2][k] * q[s + k];
    }
  }
  return out;
}

DistanceEquivalence distance_equivalence(std::span<const double> r, std::span<const double> q) {
  if (r.empty() || r[0] != 0.0) fail(ErrorCode::Domain, "grid must start at the axis");
  const auto jets = finite_difference_jets(r, q);
  DistanceEquivalence d;
  double gmax = 0.0;
  for (const auto& j : jets) gmax = std::max(gmax, std::abs(j.q1));
  d.C = std::sqrt(1.0 + gmax * gmax);
  d.max_ratio_violation = -1.0;
  double arc = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i) {
    arc += 0.5 * (r[i] - r[i - 1]) * (std::hypot(1.0, jets[i - 1].q1) + std::hypot(1.0, jets[i].q1));
    d.max_ratio_violation = std::max(d.max_ratio_violation, (arc - d.C * r[i]) / (d.C * r[i]));
  }
  return d;
}

WeightedNormReport weighted_sup_norm(std::span<const double> r, std::span<const double> u, double a) {
  if (r.empty() || r.size() != u.size()) fail(ErrorCode::GridMismatch, "samples must be nonempty");
  WeightedNormReport w;
  w.a = a;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double v = std::pow(1.0 + r[i], a) * std::abs(u[i]);
    if (v > w.value) {
      w.value = v;
      w.argmax = r[i];
    }
  }
  return w;
}

}  // namespace mcf
