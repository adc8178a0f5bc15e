#pragma once

#include <span>
#include <vector>

namespace mcf {

/// Thomas algorithm. sub[i] couples row i+1 to column i, sup[i] couples row i
/// to column i+1 (both of length n-1 or n; extra entries ignored).
std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> sup, std::span<const double> rhs);

/// Number of eigenvalues of the symmetric tridiagonal matrix (diag, off)
/// that are strictly greater than `shift` (Sturm sequence count).
int count_eigenvalues_above(std::span<const double> diag, std::span<const double> off, double shift);

}  // namespace mcf
