#pragma once

#include <span>
#include <vector>

namespace mcf {

/// Finite-difference weights (Fornberg) for derivatives 0..dmax at x0 from
/// the given nodes. Result is indexed [derivative][node].
std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> nodes, int dmax);

/// First and second derivatives of uniformly sampled data, centered
/// (2p+1)-point stencils inside and one-sided stencils of the same width at
/// the ends; accuracy order 2p.
void uniform_derivatives(std::span<const double> f, double h, int p, std::vector<double>& d1,
                         std::vector<double>& d2);

}  // namespace mcf
