#pragma once

#include <vector>

namespace mcf {

/// Geometric grid from lo to hi (both included) with the given number of
/// nodes per decade.
std::vector<double> geometric_grid(double lo, double hi, double per_decade);

/// n+1 equally spaced nodes on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, int n);

/// Grid on [0, hi] whose spacing grows like h0 (1 + r/scale)^power: fine
/// near the axis and coarser where profiles flatten out. The mapping is
/// smooth, so three-point stencils keep their second-order accuracy.
std::vector<double> graded_grid(double hi, double h0, double scale, double power);

}  // namespace mcf
