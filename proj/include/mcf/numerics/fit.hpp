#pragma once

#include <span>
#include <utility>

namespace mcf {

/// Least-squares power-law exponent estimate. `exponent` is the slope of
/// log(M) against log(x); `resid` is the RMS residual of that line in log
/// space. `window` records the abscissa range actually used.
struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log of the prefactor
  std::pair<double, double> window{0.0, 0.0};
  double resid = 0.0;
  int points = 0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fits log|y| = e log x + c over samples with x in [lo, hi]. Samples with
/// y == 0 are skipped. Throws ErrorCode::WindowTooNarrow when fewer than
/// `min_points` samples fall in the window.
RateFit fit_loglog(std::span<const double> x, std::span<const double> y, double lo, double hi,
                   int min_points = 3);

}  // namespace mcf
