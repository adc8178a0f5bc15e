#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mcf {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15-point) quadrature on [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-12, int max_depth = 15);

/// Same, split at the interior breakpoints given (sorted, inside (a, b)).
QuadResult integrate_with_breaks(const std::function<double(double)>& f, double a, double b,
                                 std::span<const double> breaks, double rel_tol = 1e-12);

/// Running integral F_i = int_{x_0}^{x_i} f dx of sampled data. Each panel
/// integrates the cubic through the four nearest nodes, so the rule is
/// fourth-order on smooth (possibly nonuniform) grids.
std::vector<double> cumulative_integral(std::span<const double> x, std::span<const double> f);

}  // namespace mcf
