#pragma once

#include "capinn/math/matrix.hpp"

namespace capinn::math {

// Orthogonalization by Newton-Schulz iterations:
//   X_0 = M / ||M||_F,   X <- 1.5 X - 0.5 (X X^T) X
// A zero input returns a zero matrix of the same shape (degenerate momentum:
// the caller's update degrades to pure weight decay).
Matrix newton_schulz(const Matrix& m, int iters = 5);

}  // namespace capinn::math
