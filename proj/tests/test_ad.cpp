#include <cmath>

#include "capinn/ad/functions.hpp"
#include "capinn/ad/jet.hpp"
#include "capinn/ad/tape.hpp"
#include "capinn/math/rng.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace capinn;
using ad::Jet;
using ad::Tape;
using ad::Var;

TEST_CASE("grad of 0.5*||theta||^2 is theta") {
  std::vector<double> theta{1.0, -2.0, 3.0};
  auto r = ad::grad(
      [](Tape& t, std::span<const Var> p) {
        Var acc = t.constant(0.0);
        for (Var v : p) acc += v * v;
        return 0.5 * acc;
      },
      theta);
  CHECK(r.value == doctest::Approx(7.0));
  for (size_t i = 0; i < theta.size(); ++i) CHECK(r.gradient[i] == doctest::Approx(theta[i]));
}

TEST_CASE("grad of theta1*theta2 + sin(theta1) at (0,5)") {
  std::vector<double> theta{0.0, 5.0};
  auto r = ad::grad(
      [](Tape&, std::span<const Var> p) { return p[0] * p[1] + sin(p[0]); }, theta);
  CHECK(r.gradient[0] == doctest::Approx(6.0));
  CHECK(r.gradient[1] == doctest::Approx(0.0));
}

TEST_CASE("grad matches finite differences on a random smooth function") {
  math::Rng rng(3);
  std::vector<double> theta(8);
  for (double& v : theta) v = rng.uniform(-1.0, 1.0);
  auto f_taped = [](Tape& t, std::span<const Var> p) {
    Var acc = t.constant(0.0);
    for (size_t i = 0; i + 1 < p.size(); ++i)
      acc += tanh(p[i] * p[i + 1]) + exp(0.1 * p[i]) + cos(p[i + 1]) / (2.0 + p[i] * p[i]);
    return acc;
  };
  auto f_plain = [](std::span<const double> p) {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < p.size(); ++i)
      acc += std::tanh(p[i] * p[i + 1]) + std::exp(0.1 * p[i]) +
             std::cos(p[i + 1]) / (2.0 + p[i] * p[i]);
    return acc;
  };
  auto r = ad::grad(f_taped, theta);
  auto fd = oracles::central_gradient(f_plain, theta);
  CHECK(oracles::max_rel_error(r.gradient, fd) <= 1e-6);
}

TEST_CASE("grad linearity on shared structure") {
  std::vector<double> theta{0.3, -0.8, 1.7};
  auto f = [](Tape&, std::span<const Var> p) { return sin(p[0]) * p[1] + p[2] * p[2]; };
  auto g = [](Tape&, std::span<const Var> p) { return exp(p[0] * p[1]) - p[2]; };
  const double a = 2.5, b = -1.25;
  auto combo = [&](Tape& t, std::span<const Var> p) { return a * f(t, p) + b * g(t, p); };
  auto rf = ad::grad(f, theta), rg = ad::grad(g, theta), rc = ad::grad(combo, theta);
  for (size_t i = 0; i < theta.size(); ++i)
    CHECK(rc.gradient[i] == doctest::Approx(a * rf.gradient[i] + b * rg.gradient[i]).epsilon(1e-14));
}

TEST_CASE("grad reports non-finite forward values with the op kind") {
  std::vector<double> theta{0.0};
  try {
    ad::grad([](Tape&, std::span<const Var> p) { return 1.0 / p[0]; }, theta);
    FAIL("expected NonFiniteError");
  } catch (const NonFiniteError& e) {
    CHECK(e.op == "div");
  }
}

TEST_CASE("jet_eval polynomial: x^2 at 3, degree 2") {
  auto j = ad::jet_eval([](auto x) { return x * x; }, 3.0, 2);
  CHECK(j.c[0] == doctest::Approx(9.0));
  CHECK(j.c[1] == doctest::Approx(6.0));
  CHECK(j.c[2] == doctest::Approx(2.0));
}

TEST_CASE("jet_eval sine derivatives at 0, degree 4") {
  auto j = ad::jet_eval([](auto x) { return sin(x); }, 0.0, 4);
  const double expect[5] = {0.0, 1.0, 0.0, -1.0, 0.0};
  for (int i = 0; i <= 4; ++i) CHECK(j.c[i] == doctest::Approx(expect[i]).epsilon(1e-14));
}

TEST_CASE("jet_eval degree-0 equals plain evaluation exactly") {
  auto f = [](auto x) { return tanh(x * x + 1.0) / (2.0 + x); };
  auto j = ad::jet_eval(f, 0.37, 0);
  CHECK(j.c[0] == f(0.37));
}

TEST_CASE("jet_eval tanh(x^2+1) matches finite differences to every order") {
  auto fj = [](auto x) { return tanh(x * x + 1.0); };
  auto fd_f = [](double x) { return std::tanh(x * x + 1.0); };
  auto j = ad::jet_eval(fj, 0.7, 4);
  CHECK(j.c[0] == doctest::Approx(fd_f(0.7)).epsilon(1e-14));
  for (int order = 1; order <= 4; ++order) {
    const double fd = oracles::central_diff(fd_f, 0.7, order, 0.08);
    CHECK(oracles::rel_error(j.c[order], fd) <= 1e-6);
  }
}

TEST_CASE("jet division and exotic compositions match finite differences") {
  auto fj = [](auto x) { return exp(sin(x)) / (x * x + 0.5) - powi(x, 3) * cos(x); };
  auto fd_f = [](double x) {
    return std::exp(std::sin(x)) / (x * x + 0.5) - x * x * x * std::cos(x);
  };
  auto j = ad::jet_eval(fj, 0.9, 4);
  for (int order = 1; order <= 4; ++order) {
    const double fd = oracles::central_diff(fd_f, 0.9, order, 0.05);
    CHECK(oracles::rel_error(j.c[order], fd) <= 1e-6);
  }
}

TEST_CASE("jet division at zero denominator raises SingularPointError") {
  CHECK_THROWS_AS(ad::jet_eval([](auto x) { return 1.0 / x; }, 0.0, 2), SingularPointError);
}

TEST_CASE("mixed_partial on monomial x^2 y^3, orders (2,2)") {
  auto f = [](auto xs) { return powi(xs[0], 2) * powi(xs[1], 3); };
  std::vector<double> pt{2.0, 1.0};
  std::vector<int> orders{2, 2};
  // d4/dx2dy2 = 2 * 6y = 12 at y=1
  CHECK(ad::mixed_partial(f, pt, orders) == doctest::Approx(12.0).epsilon(1e-13));
}

TEST_CASE("mixed_partial sin(x)cos(y), orders (1,1) at origin") {
  auto f = [](auto xs) { return sin(xs[0]) * cos(xs[1]); };
  std::vector<double> pt{0.0, 0.0};
  std::vector<int> orders{1, 1};
  CHECK(ad::mixed_partial(f, pt, orders) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("mixed_partial exp(xy) orders (2,2) matches nested finite differences") {
  auto f = [](auto xs) { return exp(xs[0] * xs[1]); };
  std::vector<double> pt{0.3, 0.5};
  std::vector<int> orders{2, 2};
  const double jet = ad::mixed_partial(f, pt, orders);
  const double fd = oracles::central_diff_2x2y(
      [](double x, double y) { return std::exp(x * y); }, 0.3, 0.5, 0.05);
  CHECK(oracles::rel_error(jet, fd) <= 1e-5);
}

TEST_CASE("mixed_partial three variables (1,1,2)") {
  auto f = [](auto xs) { return sin(xs[0]) * xs[1] * powi(xs[2], 3); };
  std::vector<double> pt{0.4, 1.3, 0.8};
  std::vector<int> orders{1, 1, 2};
  // d4/dx dy dz2 = cos(x) * 1 * 6 z
  const double expect = std::cos(0.4) * 6.0 * 0.8;
  CHECK(ad::mixed_partial(f, pt, orders) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("mixed_partial rejects total order above 4") {
  auto f = [](auto xs) { return xs[0] * xs[1]; };
  std::vector<double> pt{1.0, 1.0};
  std::vector<int> orders{3, 2};
  CHECK_THROWS_AS(ad::mixed_partial(f, pt, orders), UnsupportedOrderError);
}

TEST_CASE("jets over tape scalars stay parameter-differentiable") {
  // d/dp of the second x-derivative of tanh(p*x^2) at x0, via Jet<Var>,
  // against central differences in p of a plain double jet.
  const double p0 = 0.8, x0 = 0.6;
  Tape tape;
  Var p = tape.input(p0);
  Jet<Var> x = Jet<Var>::seed(tape.constant(x0), 2, 1.0, p);
  Jet<Var> fx = tanh(p * (x * x));
  auto adj = tape.backward(fx.c[2]);
  const double dd = adj[p.id];

  auto coeff2 = [&](double pv) {
    auto j = ad::jet_eval([&](auto xx) { return tanh(pv * (xx * xx)); }, x0, 2);
    return j.c[2];
  };
  const double fd = (coeff2(p0 + 1e-5) - coeff2(p0 - 1e-5)) / 2e-5;
  CHECK(oracles::rel_error(dd, fd) <= 1e-5);
}

TEST_CASE("tape program replays the traced computation with fresh inputs") {
  Tape tape;
  Var a = tape.input(1.0), b = tape.input(2.0);
  Var out = sin(a) * b + exp(a * b) / (b + 3.0);
  ad::TapeProgram prog(tape, {out.id});

  math::Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const double av = rng.uniform(-1.0, 1.0), bv = rng.uniform(0.5, 2.0);
    std::vector<double> in{av, bv};
    prog.forward(in);
    const double expect = std::sin(av) * bv + std::exp(av * bv) / (bv + 3.0);
    CHECK(prog.output(0) == doctest::Approx(expect).epsilon(1e-14));

    std::vector<double> seed{1.0};
    prog.backward(seed);
    auto fd = oracles::central_gradient(
        [&](std::span<const double> q) {
          return std::sin(q[0]) * q[1] + std::exp(q[0] * q[1]) / (q[1] + 3.0);
        },
        in);
    std::vector<double> got{prog.input_adjoint(0), prog.input_adjoint(1)};
    CHECK(oracles::max_rel_error(got, fd) <= 1e-6);
  }
}

TEST_CASE("backward visits shared subexpressions once (correct fan-out)") {
  std::vector<double> theta{0.7};
  auto r = ad::grad(
      [](Tape&, std::span<const Var> p) {
        Var s = sin(p[0]);
        return s * s + 3.0 * s;
      },
      theta);
  const double expect = (2.0 * std::sin(0.7) + 3.0) * std::cos(0.7);
  CHECK(r.gradient[0] == doctest::Approx(expect).epsilon(1e-14));
}
