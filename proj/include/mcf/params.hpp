#pragma once

#include <string>

namespace mcf {

/// Dimension/eigenmode pair (n, k) together with every constant derived from
/// it. The hypersurface is Sigma^{2n-1} in R^{2n}; alpha < 0 is the decay
/// exponent of the minimal surface towards the Simons cone.
struct Params {
  int n = 4;
  int k = 2;
  double alpha = 0.0;        // = alpha_plus
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  double lambda_k = 0.0;     // (alpha - 1)/2 + k
  double sigma_k = 0.0;      // lambda_k / (1 + |alpha|)
  double mu = 0.0;           // Bessel order sqrt(1/4 + (n-1)(n-4))
  double T = 1.0;            // singular time, chosen per experiment
};

/// Computes all constants for (n, k). Throws ErrorCode::Domain for n < 4 or k < 2.
Params derive_constants(int n, int k, double T = 1.0);

// The two closed forms of alpha(n); they agree algebraically.
double alpha_quadratic_form(int n);
double alpha_discriminant_form(int n);

double bessel_order(int n);

struct ExponentCondition {
  double value = 0.0;
  bool admissible = false;
  bool in_window = true;  // a in (|alpha|, |alpha| + 1)
};

/// lambda_k (1 - a/(1+|alpha|)) - 1/2 and its sign. Values of a outside
/// (|alpha|, |alpha|+1) are evaluated but flagged through in_window.
ExponentCondition exponent_condition(const Params& p, double a);

/// Supremum of the exponent condition over the open window
/// a in (|alpha|, |alpha|+1); the condition is affine and decreasing in a,
/// so the supremum is the limit a -> |alpha|, i.e. sigma_k - 1/2.
double exponent_condition_sup(const Params& p);

/// True when some a in the open window makes the exponent condition hold.
bool admissible_for_some_a(const Params& p);

/// Lambda(t) = (T - t)^{-sigma_k - 1/2}. Throws ErrorCode::Domain for t >= T.
double blowup_scale(const Params& p, double t);

std::string describe(const Params& p);

}  // namespace mcf
