#pragma once

#include <memory>
#include <vector>

#include "mcf/minimal_surface.hpp"

namespace mcf {

/// Coefficients of the radial Jacobi operator
///   L u = u'' + (n-1)(1+Q'^2) u'/r + V u = (1/J)(J u')' + V u
/// at one radius, together with the factorization weight W = u0'/u0.
struct JacobiCoeffs {
  double r = 0.0;
  double J = 0.0;      // r^{n-1} Q^{n-1} / sqrt(1+Q'^2)
  double dlogJ = 0.0;  // J'/J
  double V = 0.0;      // (Q''/(1+Q'^2))^2 + (n-1)Q'^2/r^2 + (n-1)/Q^2
  double g = 1.0;      // 1 + Q'^2
  double u0 = 0.0, u0_1 = 0.0, u0_2 = 0.0;
  double W = 0.0;
  double W1 = 0.0;     // W'
};

JacobiCoeffs jacobi_coeffs(const MinimalProfile& mp, double r);

/// Potential at the axis: n ((n-1)/(n b))^2 + (n-1)/b^2.
double jacobi_axis_potential(int n, double b);

struct JacobiOptions {
  double per_decade = 400.0;
  double r_first = 1e-3;  // first node, in units of b
};

/// Sampled operator on a geometric grid from r_first * b to mp.r_max.
struct JacobiData {
  std::shared_ptr<const MinimalProfile> mp;
  int n = 4;
  std::vector<double> r;
  std::vector<double> J, dlogJ, V, g, W, u0, u0_1, u0_2;
  double J_lower = 0.0, J_upper = 0.0;  // c, C in c(1+r)^{n-1} r^{n-1} <= J <= C(...)
  double log_step = 0.0;                // uniform spacing in log r

  std::size_t size() const { return r.size(); }
};

JacobiData assemble(std::shared_ptr<const MinimalProfile> mp, const JacobiOptions& opt = {});

/// L u on the grid from samples, using fourth-order differences in log r
/// applied to the ground-state form L u = (1/(J u0)) (J u0^2 (u/u0)')'.
/// Sampling noise in u0 then enters only multiplicatively, which keeps the
/// 1/r^2 amplification of second differences near the axis in check.
std::vector<double> apply_L(const JacobiData& jd, const std::vector<double>& u);

/// L u from analytic jets.
std::vector<double> apply_L(const JacobiData& jd, const std::vector<double>& u,
                            const std::vector<double>& u1, const std::vector<double>& u2);

/// (A*)^{-1} f = (1/(u0 J)) int_0^r f J u0.
std::vector<double> invert_A_star(const JacobiData& jd, const std::vector<double>& f);

struct AInverse {
  std::vector<double> u;
  bool integrable = false;   // true: u0 int_r^inf g/u0; false: -u0 int_0^r g/u0
  double tail_exponent = 0.0;
};

/// A^{-1} g, choosing the branch from the tail exponent of g/u0.
/// Throws BranchAmbiguous when that exponent is within 0.1 of -1.
AInverse invert_A(const JacobiData& jd, const std::vector<double>& g);

struct LInverse {
  std::vector<double> u;
  bool integrable = false;
  double tail_exponent = 0.0;
};

/// L^{-1} f = -A^{-1} (A*)^{-1} f.
LInverse invert_L(const JacobiData& jd, const std::vector<double>& f);

struct KernelTerm {
  int j = 0;
  std::vector<double> u;
  double inner_exponent = 0.0;
  double outer_exponent = 0.0;
  // j >= 1: relative sup of L u_j - (1+Q'^2) u_{j-1} on the middle half of
  // the grid; j = 0: absolute sup of L u0 for r <= r_max / 2.
  double residual = 0.0;
  double min_value = 0.0; // min over r > 0
};

/// u_0 = u0 and u_j = L^{-1}((1+Q'^2) u_{j-1}) for j = 1..j_max.
/// Requires r_max >= 10^{2 + j_max/2} b.
std::vector<KernelTerm> generalized_kernel(const JacobiData& jd, int j_max);

/// Windows used for the exponent fits of generalized_kernel.
std::pair<double, double> inner_fit_window(const JacobiData& jd);
std::pair<double, double> outer_fit_window(const JacobiData& jd);

struct IndicialRoots {
  double zero_regular = 0.0;
  double zero_singular = 0.0;  // -(n-2)
  double inf_plus = 0.0;       // alpha_+
  double inf_minus = 0.0;      // alpha_-
};

IndicialRoots indicial_roots(int n);

struct SecondSolution {
  std::vector<double> r, v, v1;
  double inner_exponent = 0.0;
  double wronskian_spread = 0.0;  // (max - min)/|mean| of J (u0 v' - v u0') at sample radii
};

/// The kernel element v0 ~ r^{alpha_-} at infinity, integrated inwards from
/// r_max; samples on jd's grid.
SecondSolution second_solution(const JacobiData& jd, double tol = 1e-13);

struct Spectrum {
  double top = 0.0;
  int iterations = 0;
  std::vector<double> r, mode;
};

/// Largest eigenvalue of Delta + |A|^2 on radial functions over [0, R]
/// (Dirichlet at R), discretized by finite volumes on `nodes` cells.
/// The discrete operator is symmetric in the weight J (1+Q'^2) dr.
Spectrum top_eigenvalue(const MinimalProfile& mp, double R_trunc, int nodes = 4000);

/// Rayleigh quotient of u0 chi for a smooth cutoff chi = 1 on [0, R/2]
/// falling to 0 at R.
double u0_rayleigh_quotient(const MinimalProfile& mp, double R);

}  // namespace mcf
