#pragma once

#include <span>
#include <vector>

namespace mcf {

/// Profile value and its first two radial derivatives at one radius.
/// At the axis (r = 0) smoothness forces q1 = 0.
struct ProfileJet {
  double r = 0.0;
  double q = 1.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

/// Metric and second fundamental form of the O(n)xO(n)-invariant
/// hypersurface generated by a profile, in the frame (radial, x-sphere,
/// y-sphere). Covariant entries are taken against the unit-sphere metrics,
/// so g_omega = r^2 and g_theta = Q^2. At the axis the x-sphere block
/// degenerates; there g_omega is set to 1 and a_omega holds the limiting
/// principal curvature Q''(0).
struct CurvatureData {
  double g_rr = 1.0;
  double g_omega = 1.0;
  double g_theta = 1.0;
  double a_rr = 0.0;
  double a_omega = 0.0;
  double a_theta = 0.0;
  double H = 0.0;
  double A2 = 0.0;

  // Principal curvatures a_ii / g_ii.
  double kappa_r() const { return a_rr / g_rr; }
  double kappa_omega() const { return a_omega / g_omega; }
  double kappa_theta() const { return a_theta / g_theta; }
};

CurvatureData curvature(int n, const ProfileJet& jet);

/// g^{ij} A_ij recomputed from the stored entries.
double trace_from_entries(int n, const CurvatureData& c);

struct UnitNormal {
  double radial = 0.0;
  double spherical = 1.0;
};

UnitNormal unit_normal(const ProfileJet& jet);

/// u = <X, nu> = (Q - r Q') / sqrt(1 + Q'^2).
double normal_position(const ProfileJet& jet);

struct FunctionJet {
  double u = 0.0, u1 = 0.0, u2 = 0.0;
};

/// Laplace-Beltrami operator of the hypersurface on a radial function.
double laplace_beltrami_radial(int n, const ProfileJet& jet, const FunctionJet& u);

/// The reduced form u''/(1+Q'^2) + (n-1) u'/r, valid on minimal profiles.
double laplace_beltrami_minimal(int n, const ProfileJet& jet, const FunctionJet& u);

/// Second-order finite-difference jets of sampled Q on a (possibly
/// nonuniform) grid. When r[0] == 0 the axis node uses Q'(0) = 0 and
/// Q''(0) = 2 (Q_1 - Q_0)/h^2.
std::vector<ProfileJet> finite_difference_jets(std::span<const double> r, std::span<const double> q);

struct DistanceEquivalence {
  double C = 1.0;
  double max_ratio_violation = 0.0;  // max_i (L_i - C r_i) / (C r_i); <= 0 verifies
};

/// Compares the arclength of the radial path to the cone, int_0^r
/// sqrt(1+Q'^2), with C r where C = sqrt(1 + max |Q'|^2). The grid must start
/// at r = 0.
DistanceEquivalence distance_equivalence(std::span<const double> r, std::span<const double> q);

struct WeightedNormReport {
  double a = 0.0;
  double value = 0.0;
  double argmax = 0.0;
};

/// max_i (1 + r_i)^a |u_i|.
WeightedNormReport weighted_sup_norm(std::span<const double> r, std::span<const double> u, double a);

}  // namespace mcf
