#include "capinn/math/newton_schulz.hpp"

namespace capinn::math {

Matrix newton_schulz(const Matrix& m, int iters) {
  if (iters < 1) throw DimensionError("newton_schulz: iters must be >= 1");
  const double norm = m.frobenius_norm();
  if (norm == 0.0) return Matrix(m.rows(), m.cols());

  Matrix x = m;
  x *= 1.0 / norm;
  for (int i = 0; i < iters; ++i) {
    Matrix a = matmul_nt(x, x);         // A = X X^T
    Matrix ax = matmul(a, x);
    x *= 1.5;
    ax *= 0.5;
    x -= ax;                            // X = 1.5 X - 0.5 A X
  }
  return x;
}

}  // namespace capinn::math
