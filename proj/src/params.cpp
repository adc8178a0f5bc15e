#include "mcf/params.hpp"

#include <cmath>
#include <sstream>

#include "mcf/errors.hpp"

namespace mcf {

double alpha_quadratic_form(int n) {
  const double m = 2.0 * n - 3.0;
  return 0.5 * (-m + std::sqrt(m * m - 8.0 * (n - 1)));
}

double alpha_discriminant_form(int n) {
  const double m = 2.0 * n - 1.0;
  return -(2.0 * n - 3.0) / 2.0 + 0.5 * std::sqrt(m * m - 16.0 * (n - 1));
}

double bessel_order(int n) {
  return std::sqrt(0.25 + static_cast<double>(n - 1) * (n - 4));
}

Params derive_constants(int n, int k, double T) {
  if (n < 4) fail(ErrorCode::Domain, "n must satisfy n >= 4, got n = " + std::to_string(n));
  if (k < 2) fail(ErrorCode::Domain, "k must satisfy k >= 2, got k = " + std::to_string(k));

  Params p;
  p.n = n;
  p.k = k;
  p.T = T;
  const double m = 2.0 * n - 3.0;
  const double disc = std::sqrt(m * m - 8.0 * (n - 1));
  p.alpha_plus = 0.5 * (-m + disc);
  p.alpha_minus = 0.5 * (-m - disc);
  p.alpha = p.alpha_plus;
  p.lambda_k = (p.alpha - 1.0) / 2.0 + k;
  p.sigma_k = p.lambda_k / (1.0 + std::abs(p.alpha));
  p.mu = bessel_order(n);
  return p;
}

ExponentCondition exponent_condition(const Params& p, double a) {
  const double abs_alpha = std::abs(p.alpha);
  ExponentCondition c;
  c.value = p.lambda_k * (1.0 - a / (1.0 + abs_alpha)) - 0.5;
  c.admissible = c.value >= 0.0;
  c.in_window = a > abs_alpha && a < abs_alpha + 1.0;
  return c;
}

double exponent_condition_sup(const Params& p) { return p.sigma_k - 0.5; }

bool admissible_for_some_a(const Params& p) {
  // The window is open, so the supremum itself is not attained.
  return exponent_condition_sup(p) > 0.0;
}

double blowup_scale(const Params& p, double t) {
  if (!(t < p.T)) {
    std::ostringstream os;
    os << "blow-up scale requires t < T (t = " << t << ", T = " << p.T << ")";
    fail(ErrorCode::Domain, os.str());
  }
  return std::pow(p.T - t, -p.sigma_k - 0.5);
}

std::string describe(const Params& p) {
  std::ostringstream os;
  os.precision(12);
  os << "n=" << p.n << " k=" << p.k << " alpha=" << p.alpha << " alpha_minus=" << p.alpha_minus
     << " lambda=" << p.lambda_k << " sigma=" << p.sigma_k << " mu=" << p.mu << " T=" << p.T;
  return os.str();
}

}  // namespace mcf
