#include "mcf/numerics/grid.hpp"

#include <cmath>

#include "mcf/errors.hpp"

namespace mcf {

std::vector<double> geometric_grid(double lo, double hi, double per_decade) {
  if (!(lo > 0 && hi > lo && per_decade > 0)) fail(ErrorCode::Domain, "invalid geometric grid");
  const int m = std::max(1, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)));
  const double ratio = std::log(hi / lo) / m;
  std::vector<double> g(m + 1);
  for (int i = 0; i <= m; ++i) g[i] = lo * std::exp(ratio * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (n < 1 || !(hi > lo)) fail(ErrorCode::Domain, "invalid uniform grid");
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = lo + (hi - lo) * i / n;
  g.back() = hi;
  return g;
}

std::vector<double> graded_grid(double hi, double h0, double scale, double power) {
  if (!(hi > 0 && h0 > 0 && scale > 0)) fail(ErrorCode::Domain, "invalid graded grid");
  // Uniform in xi with dr/dxi = (1 + r/scale)^power; integrate the mapping
  // exactly and then stretch so the last node lands on hi.
  auto xi_of_r = [&](double r) {
    if (std::abs(power - 1.0) < 1e-12) return scale * std::log1p(r / scale);
    return scale * (std::pow(1 + r / scale, 1 - power) - 1) / (1 - power);
  };
  auto r_of_xi = [&](double xi) {
    if (std::abs(power - 1.0) < 1e-12) return scale * std::expm1(xi / scale);
    return scale * (std::pow(1 + xi * (1 - power) / scale, 1 / (1 - power)) - 1);
  };
  const double xi_hi = xi_of_r(hi);
  const int m = std::max(2, static_cast<int>(std::ceil(xi_hi / h0)));
  std::vector<double> g(m + 1);
  for (int i = 0; i <= m; ++i) g[i] = r_of_xi(xi_hi * i / m);
  g.front() = 0.0;
  g.back() = hi;
  return g;
}

}  // namespace mcf
