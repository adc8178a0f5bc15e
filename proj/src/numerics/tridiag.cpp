#include "mcf/numerics/tridiag.hpp"

#include <cmath>
#include <limits>

#include "mcf/errors.hpp"

namespace mcf {

std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> sup, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (rhs.size() != n || (n > 1 && (sub.size() < n - 1 || sup.size() < n - 1)))
    fail(ErrorCode::GridMismatch, "tridiagonal system has inconsistent band lengths");
  std::vector<double> c(n), d(n);
  double beta = diag[0];
  if (beta == 0.0) fail(ErrorCode::NonConvergence, "singular tridiagonal pivot");
  d[0] = rhs[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    c[i - 1] = sup[i - 1] / beta;
    beta = diag[i] - sub[i - 1] * c[i - 1];
    if (beta == 0.0) fail(ErrorCode::NonConvergence, "singular tridiagonal pivot");
    d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

int count_eigenvalues_above(std::span<const double> diag, std::span<const double> off, double shift) {
  // Counts negative pivots of (T - shift I), i.e. eigenvalues below the
  // shift, then converts.
  const std::size_t n = diag.size();
  int below = 0;
  double q = diag[0] - shift;
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  if (q == 0.0) q = -tiny;
  if (q < 0) ++below;
  for (std::size_t i = 1; i < n; ++i) {
    q = diag[i] - shift - off[i - 1] * off[i - 1] / q;
    if (q == 0.0) q = -tiny;
    if (q < 0) ++below;
  }
  return static_cast<int>(n) - below;
}

}  // namespace mcf
