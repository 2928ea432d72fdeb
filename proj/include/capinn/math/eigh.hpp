#pragma once

#include <vector>

#include "capinn/math/matrix.hpp"

namespace capinn::math {

struct EighResult {
  std::vector<double> eigenvalues;  // sorted descending
  Matrix eigenvectors;              // orthonormal columns, column i pairs with eigenvalues[i]
};

// Symmetric eigendecomposition by cyclic Jacobi rotations.
// Input must be square and symmetric to 1e-12 relative. Throws
// ConvergenceError if the off-diagonal mass has not dropped below
// tol * ||S||_F after max_sweeps sweeps.
EighResult jacobi_eigh(const Matrix& s, double tol = 1e-12, int max_sweeps = 100);

}  // namespace capinn::math
