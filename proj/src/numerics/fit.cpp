#include "mcf/numerics/fit.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mcf/errors.hpp"

namespace mcf {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) fail(ErrorCode::WindowTooNarrow, "line fit needs at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorCode::WindowTooNarrow, "degenerate abscissae in line fit");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / m);
  return f;
}

RateFit fit_loglog(std::span<const double> x, std::span<const double> y, double lo, double hi,
                   int min_points) {
  std::vector<double> lx, ly;
  double used_lo = 0, used_hi = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo || x[i] > hi || x[i] <= 0.0 || y[i] == 0.0 || !std::isfinite(y[i])) continue;
    if (lx.empty()) used_lo = x[i];
    used_hi = x[i];
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  if (static_cast<int>(lx.size()) < min_points) {
    fail(ErrorCode::WindowTooNarrow, "only " + std::to_string(lx.size()) +
                                         " samples in fit window, need " +
                                         std::to_string(min_points));
  }
  const LineFit lf = fit_line(lx, ly);
  RateFit r;
  r.exponent = lf.slope;
  r.intercept = lf.intercept;
  r.resid = lf.rms;
  r.window = {used_lo, used_hi};
  r.points = static_cast<int>(lx.size());
  return r;
}

}  // namespace mcf
