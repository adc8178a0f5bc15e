#include "mcf/numerics/fd.hpp"

#include <algorithm>

#include "mcf/errors.hpp"

namespace mcf {

std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> x, int dmax) {
  const std::size_t m = x.size();
  std::vector<std::vector<double>> c(dmax + 1, std::vector<double>(m, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0, c4 = x[0] - x0;
  for (std::size_t i = 1; i < m; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), dmax);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

void uniform_derivatives(std::span<const double> f, double h, int p, std::vector<double>& d1,
                         std::vector<double>& d2) {
  const std::size_t n = f.size();
  const std::size_t width = 2 * p + 1;
  if (n < width + 1) fail(ErrorCode::GridMismatch, "too few samples for the stencil");
  d1.assign(n, 0.0);
  d2.assign(n, 0.0);
  // Stencils depend only on the offset of the node within its window.
  std::vector<double> offs(width + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s, m = width;
    if (i < static_cast<std::size_t>(p)) {
      s = 0;
      m = width + 1;
    } else if (i + p >= n) {
      m = width + 1;
      s = n - m;
    } else {
      s = i - p;
    }
    for (std::size_t k = 0; k < m; ++k) offs[k] = static_cast<double>(s + k) - static_cast<double>(i);
    const auto w = fd_weights(0.0, std::span<const double>(offs.data(), m), 2);
    double a = 0, b = 0;
    for (std::size_t k = 0; k < m; ++k) {
      a += w[1][k] * f[s + k];
      b += w[2][k] * f[s + k];
    }
    d1[i] = a / h;
    d2[i] = b / (h * h);
  }
}

}  // namespace mcf
