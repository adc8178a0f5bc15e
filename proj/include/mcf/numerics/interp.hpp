#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mcf {

/// Index i with x[i] <= v <= x[i+1], clamped to the valid interval range.
std::size_t locate_interval(std::span<const double> x, double v);

/// Cubic Hermite interpolation from values and first derivatives.
double hermite3(std::span<const double> x, std::span<const double> f, std::span<const double> df,
                double v);

struct Jet2 {
  double f = 0, df = 0, d2f = 0;
};

/// Quintic Hermite interpolation from values, first and second derivatives.
/// Returns the interpolated value with its first two derivatives.
Jet2 hermite5(std::span<const double> x, std::span<const double> f, std::span<const double> df,
              std::span<const double> d2f, double v);

/// Natural cubic spline through (x_i, y_i); x strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  /// Clamped variant with prescribed end slopes.
  CubicSpline(std::vector<double> x, std::vector<double> y, double d_lo, double d_hi);

  double operator()(double v) const;
  double derivative(double v) const;
  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

}  // namespace mcf
