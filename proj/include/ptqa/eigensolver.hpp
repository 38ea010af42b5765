#pragma once

#include "ptqa/model.hpp"

#include <span>
#include <vector>

namespace ptqa {

/// Largest matrix dimension accepted by eigenvalues().
inline constexpr Eigen::Index kMaxEigenDim = 64;

/// Monic characteristic polynomial det(E I - A), coefficients in descending
/// powers (size n+1, leading 1), via the Faddeev-LeVerrier trace recursion.
std::vector<Complex> characteristic_polynomial(const Operator& op);

/// Horner evaluation of a descending-power polynomial.
Complex evaluate_polynomial(std::span<const Complex> coeffs, Complex z);

/// All roots of a monic polynomial by Aberth-Ehrlich simultaneous iteration with
/// Newton polishing.  Roots closer than the double-root noise floor are merged.
std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs);

/// All eigenvalues of a small dense matrix, unordered.  Throws NumericalError
/// (message carries the matrix) if the root finder does not converge.
std::vector<Complex> eigenvalues(const Operator& op);

/// Right eigenvector for a known eigenvalue by inverse iteration on (A - E I).
/// Different seeds start from different deterministic vectors.
Amplitudes eigenvector(const Operator& op, Complex eigenvalue, unsigned seed = 0);

}  // namespace ptqa
