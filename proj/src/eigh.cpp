#include "capinn/math/eigh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace capinn::math {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EighResult jacobi_eigh(const Matrix& s, double tol, int max_sweeps) {
  const int n = s.rows();
  if (n != s.cols()) throw DimensionError("jacobi_eigh: matrix not square");
  if (tol <= 0.0) throw DimensionError("jacobi_eigh: tol must be positive");

  double max_abs = 0.0;
  for (double v : s.data()) max_abs = std::max(max_abs, std::abs(v));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(s(i, j) - s(j, i)) > 1e-12 * std::max(1.0, max_abs))
        throw DimensionError("jacobi_eigh: matrix not symmetric");

  Matrix a = s;
  Matrix v = Matrix::identity(n);
  const double fro = std::max(a.frobenius_norm(), 1e-300);

  bool converged = (n <= 1) || off_diagonal_norm(a) <= tol * fro;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        // tan of the rotation angle, smaller root for stability
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;

        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
    converged = off_diagonal_norm(a) <= tol * fro;
  }
  if (!converged)
    throw ConvergenceError("jacobi_eigh: no convergence within sweep budget");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) > a(j, j); });

  EighResult res;
  res.eigenvalues.resize(n);
  res.eigenvectors = Matrix(n, n);
  for (int col = 0; col < n; ++col) {
    const int src = order[col];
    res.eigenvalues[col] = a(src, src);
    // fix the sign so the largest-|entry| component is nonnegative
    int pivot = 0;
    double best = -1.0;
    for (int k = 0; k < n; ++k) {
      const double m = std::abs(v(k, src));
      if (m > best) { best = m; pivot = k; }
    }
    const double sign = v(pivot, src) < 0.0 ? -1.0 : 1.0;
    for (int k = 0; k < n; ++k) res.eigenvectors(k, col) = sign * v(k, src);
  }
  return res;
}

}  // namespace capinn::math
