#include "mcf/numerics/interp.hpp"

#include <algorithm>

#include "mcf/errors.hpp"
#include "mcf/numerics/tridiag.hpp"

namespace mcf {

std::size_t locate_interval(std::span<const double> x, double v) {
  if (x.size() < 2) fail(ErrorCode::GridMismatch, "interpolation needs at least two nodes");
  auto it = std::upper_bound(x.begin(), x.end(), v);
  std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  return std::min(i, x.size() - 2);
}

double hermite3(std::span<const double> x, std::span<const double> f, std::span<const double> df,
                double v) {
  const std::size_t i = locate_interval(x, v);
  const double h = x[i + 1] - x[i];
  const double s = (v - x[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * f[i] + h10 * h * df[i] + h01 * f[i + 1] + h11 * h * df[i + 1];
}

Jet2 hermite5(std::span<const double> x, std::span<const double> f, std::span<const double> df,
              std::span<const double> d2f, double v) {
  const std::size_t i = locate_interval(x, v);
  const double h = x[i + 1] - x[i];
  const double s = (v - x[i]) / h;
  // Local polynomial p(s) = sum c_k s^k matching f, h f', h^2 f'' at both ends.
  const double a0 = f[i], a1 = h * df[i], a2 = 0.5 * h * h * d2f[i];
  const double b0 = f[i + 1], b1 = h * df[i + 1], b2 = 0.5 * h * h * d2f[i + 1];
  const double c0 = a0, c1 = a1, c2 = a2;
  // Remaining coefficients solve the 3x3 end conditions at s = 1.
  const double r0 = b0 - (c0 + c1 + c2);
  const double r1 = b1 - (c1 + 2 * c2);
  const double r2 = 2 * b2 - 2 * c2;
  const double c3 = 10 * r0 - 4 * r1 + 0.5 * r2;
  const double c4 = -15 * r0 + 7 * r1 - r2;
  const double c5 = 6 * r0 - 3 * r1 + 0.5 * r2;
  Jet2 j;
  j.f = c0 + s * (c1 + s * (c2 + s * (c3 + s * (c4 + s * c5))));
  const double dp = c1 + s * (2 * c2 + s * (3 * c3 + s * (4 * c4 + s * 5 * c5)));
  const double d2p = 2 * c2 + s * (6 * c3 + s * (12 * c4 + s * 20 * c5));
  j.df = dp / h;
  j.d2f = d2p / (h * h);
  return j;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) fail(ErrorCode::GridMismatch, "spline needs matching samples");
  m_.assign(n, 0.0);
  if (n == 2) return;
  std::vector<double> sub(n - 2), diag(n - 2), sup(n - 2), rhs(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    sub[i - 1] = h0 / 6;
    diag[i - 1] = (h0 + h1) / 3;
    sup[i - 1] = h1 / 6;
    rhs[i - 1] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  const std::vector<double> sol = solve_tridiagonal(sub, diag, sup, rhs);
  std::copy(sol.begin(), sol.end(), m_.begin() + 1);
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y, double d_lo, double d_hi)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) fail(ErrorCode::GridMismatch, "spline needs matching samples");
  std::vector<double> sub(n - 1), diag(n), sup(n - 1), rhs(n);
  const double ha = x_[1] - x_[0], hb = x_[n - 1] - x_[n - 2];
  diag[0] = ha / 3;
  sup[0] = ha / 6;
  rhs[0] = (y_[1] - y_[0]) / ha - d_lo;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    sub[i - 1] = h0 / 6;
    diag[i] = (h0 + h1) / 3;
    sup[i] = h1 / 6;
    rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  sub[n - 2] = hb / 6;
  diag[n - 1] = hb / 3;
  rhs[n - 1] = d_hi - (y_[n - 1] - y_[n - 2]) / hb;
  m_ = solve_tridiagonal(sub, diag, sup, rhs);
}

double CubicSpline::operator()(double v) const {
  const std::size_t i = locate_interval(x_, v);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - v) / h, b = (v - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6;
}

double CubicSpline::derivative(double v) const {
  const std::size_t i = locate_interval(x_, v);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - v) / h, b = (v - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h + ((1 - 3 * a * a) * m_[i] + (3 * b * b - 1) * m_[i + 1]) * h / 6;
}

}  // namespace mcf
