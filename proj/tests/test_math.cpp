#include <cmath>

#include "capinn/math/eigh.hpp"
#include "capinn/math/matrix.hpp"
#include "capinn/math/newton_schulz.hpp"
#include "capinn/math/rng.hpp"

#include "doctest.h"

using namespace capinn;
using math::Matrix;

namespace {

Matrix random_symmetric(int n, math::Rng& rng, double scale = 1.0) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = scale * rng.uniform(-1.0, 1.0);
  return a;
}

// Polar factor through the Gram-matrix eigendecomposition: M = U S V^T with
// M^T M = V S^2 V^T, polar(M) = M V S^{-1} V^T. Independent of the
// Newton-Schulz code path.
Matrix polar_oracle(const Matrix& m) {
  Matrix gram = math::matmul_tn(m, m);
  auto eig = math::jacobi_eigh(gram);
  const int n = gram.rows();
  Matrix vs_inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      vs_inv(i, j) = eig.eigenvectors(i, j) / std::sqrt(std::max(eig.eigenvalues[j], 1e-300));
  return math::matmul(m, math::matmul_nt(vs_inv, eig.eigenvectors));
}

double ortho_residual(const Matrix& x) {
  Matrix g = math::matmul_nt(x, x);
  for (int i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return g.frobenius_norm();
}

}  // namespace

TEST_CASE("jacobi_eigh on 2x2 analytic case") {
  Matrix s(2, 2, {2, 1, 1, 2});
  auto r = math::jacobi_eigh(s);
  CHECK(r.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(r.eigenvectors(0, 0)) == doctest::Approx(inv_sqrt2));
  CHECK(std::abs(r.eigenvectors(1, 0)) == doctest::Approx(inv_sqrt2));
  CHECK(r.eigenvectors(0, 0) * r.eigenvectors(1, 0) > 0.0);  // (1,1) direction
  CHECK(r.eigenvectors(0, 1) * r.eigenvectors(1, 1) < 0.0);  // (1,-1) direction
}

TEST_CASE("jacobi_eigh identity matrix") {
  auto r = math::jacobi_eigh(Matrix::identity(4));
  for (int i = 0; i < 4; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(1.0));
  // columns orthonormal and a permutation of I up to sign
  CHECK(ortho_residual(r.eigenvectors) < 1e-12);
}

TEST_CASE("jacobi_eigh reconstruction on random 8x8 Gram matrix") {
  math::Rng rng(42);
  Matrix a(8, 8);
  for (double& v : a.data()) v = rng.uniform(-1.0, 1.0);
  Matrix s = math::matmul_tn(a, a);
  auto r = math::jacobi_eigh(s);
  Matrix vl(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) vl(i, j) = r.eigenvectors(i, j) * r.eigenvalues[j];
  Matrix rec = math::matmul_nt(vl, r.eigenvectors);
  rec -= s;
  CHECK(rec.frobenius_norm() / s.frobenius_norm() <= 1e-10);
}

TEST_CASE("jacobi_eigh property: reconstruction and orthonormality up to 32x32") {
  math::Rng rng(7);
  for (int trial = 0; trial < 24; ++trial) {
    const int n = 2 + int(rng.below(31));
    Matrix s = random_symmetric(n, rng, 1.0 + trial);
    auto r = math::jacobi_eigh(s);
    CHECK(ortho_residual(r.eigenvectors) <= 1e-10);
    Matrix vl(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) vl(i, j) = r.eigenvectors(i, j) * r.eigenvalues[j];
    Matrix rec = math::matmul_nt(vl, r.eigenvectors);
    rec -= s;
    CHECK(rec.frobenius_norm() <= 1e-9 * s.frobenius_norm());
    for (int i = 0; i + 1 < n; ++i) CHECK(r.eigenvalues[i] >= r.eigenvalues[i + 1]);
  }
}

TEST_CASE("jacobi_eigh rejects bad input") {
  CHECK_THROWS_AS(math::jacobi_eigh(Matrix(2, 3)), DimensionError);
  Matrix asym(2, 2, {1, 2, 3, 4});
  CHECK_THROWS_AS(math::jacobi_eigh(asym), DimensionError);
}

TEST_CASE("newton_schulz scalar fixed point") {
  Matrix m(1, 1, {3.5});
  Matrix x = math::newton_schulz(m, 5);
  CHECK(x(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("newton_schulz zero matrix signals degenerate momentum") {
  Matrix x = math::newton_schulz(Matrix(3, 2), 5);
  CHECK(x.frobenius_norm() == 0.0);
  CHECK(x.rows() == 3);
  CHECK(x.cols() == 2);
}

TEST_CASE("newton_schulz drives a scaled rotation toward orthogonality") {
  const double th = 0.7;
  Matrix q(3, 3);
  q(0, 0) = std::cos(th); q(0, 1) = -std::sin(th);
  q(1, 0) = std::sin(th); q(1, 1) = std::cos(th);
  q(2, 2) = 1.0;
  Matrix m = q;
  m *= 2.3;
  Matrix x = math::newton_schulz(m, 5);
  CHECK(ortho_residual(x) < 1e-3);
  // the iteration preserves the rotation's direction
  Matrix d = x - q;
  CHECK(d.frobenius_norm() < 1e-3);
}

TEST_CASE("newton_schulz vs polar oracle on diag(3,1) and random 3x3") {
  Matrix d(2, 2, {3, 0, 0, 1});
  Matrix x = math::newton_schulz(d, 5);
  Matrix p = polar_oracle(d);  // identity
  const double cosang =
      math::fro_dot(x, p) / (x.frobenius_norm() * p.frobenius_norm());
  CHECK(std::acos(std::min(1.0, cosang)) <= 0.02);

  // rotated diag(2, 1.4, 0.9): singular values inside the NS(5) basin
  const double a = 0.35;
  Matrix r1(3, 3);
  r1(0, 0) = std::cos(a); r1(0, 1) = -std::sin(a); r1(1, 0) = std::sin(a);
  r1(1, 1) = std::cos(a); r1(2, 2) = 1.0;
  Matrix sv(3, 3);
  sv(0, 0) = 2.0; sv(1, 1) = 1.4; sv(2, 2) = 0.9;
  Matrix m = math::matmul(r1, sv);
  Matrix x3 = math::newton_schulz(m, 5);
  Matrix p3 = polar_oracle(m);
  const double c3 = math::fro_dot(x3, p3) / (x3.frobenius_norm() * p3.frobenius_norm());
  CHECK(std::acos(std::min(1.0, c3)) <= 0.02);
}

TEST_CASE("newton_schulz is scale-invariant in direction") {
  math::Rng rng(5);
  Matrix m(4, 3);
  for (double& v : m.data()) v = rng.uniform(-1.0, 1.0);
  Matrix a = math::newton_schulz(m, 5);
  Matrix m2 = m;
  m2 *= 37.25;
  Matrix b = math::newton_schulz(m2, 5);
  b -= a;
  CHECK(b.frobenius_norm() <= 1e-12);
}

TEST_CASE("rng determinism: equal seeds give equal streams") {
  math::Rng a(123456), b(123456);
  for (int i = 0; i < 10000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng split streams are deterministic and distinct") {
  math::Rng root(99);
  math::Rng c1 = root.split(1), c1b = math::Rng(99).split(1), c2 = root.split(2);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) {
    uint64_t x = c1.next_u64();
    CHECK(x == c1b.next_u64());
    if (x == c2.next_u64()) ++equal;
  }
  CHECK(equal == 0);
}

TEST_CASE("rng uniform stays in range with sane mean") {
  math::Rng rng(2024);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("matrix from_external rejects non-finite entries") {
  CHECK_THROWS_AS(Matrix::from_external(1, 2, {1.0, std::nan("")}), NonFiniteError);
}
