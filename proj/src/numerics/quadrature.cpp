#include "mcf/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mcf/errors.hpp"

namespace mcf {

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     int max_depth) {
  QuadResult r;
  if (a == b) return r;
  double err = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, static_cast<unsigned>(max_depth), rel_tol, &err);
  r.error = err;
  return r;
}

QuadResult integrate_with_breaks(const std::function<double(double)>& f, double a, double b,
                                 std::span<const double> breaks, double rel_tol) {
  QuadResult total;
  double left = a;
  for (double br : breaks) {
    if (br <= left || br >= b) continue;
    const QuadResult piece = integrate(f, left, br, rel_tol);
    total.value += piece.value;
    total.error += piece.error;
    left = br;
  }
  const QuadResult last = integrate(f, left, b, rel_tol);
  total.value += last.value;
  total.error += last.error;
  return total;
}

std::vector<double> cumulative_integral(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = x.size();
  if (f.size() != n || n < 4) fail(ErrorCode::GridMismatch, "cumulative integral needs >= 4 samples");
  std::vector<double> out(n, 0.0);
  // Two-point Gauss-Legendre is exact for the local cubic.
  const double g = 0.5 / std::sqrt(3.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t s = (i == 0) ? 0 : i - 1;
    s = std::min(s, n - 4);
    const double* xs = &x[s];
    const double* fs = &f[s];
    const double h = x[i + 1] - x[i];
    const double mid = 0.5 * (x[i] + x[i + 1]);
    double panel = 0.0;
    for (double q : {mid - g * h, mid + g * h}) {
      double val = 0.0;
      for (int a = 0; a < 4; ++a) {
        double basis = 1.0;
        for (int c = 0; c < 4; ++c)
          if (c != a) basis *= (q - xs[c]) / (xs[a] - xs[c]);
        val += basis * fs[a];
      }
      panel += 0.5 * h * val;
    }
    out[i + 1] = out[i] + panel;
  }
  return out;
}

}  // namespace mcf
