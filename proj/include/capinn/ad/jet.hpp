#pragma once

#include <array>
#include <cmath>
#include <type_traits>

#include "capinn/ad/tape.hpp"
#include "capinn/errors.hpp"

namespace capinn::ad {

template <class S>
struct Jet;

template <class T>
inline constexpr bool is_jet_v = false;
template <class S>
inline constexpr bool is_jet_v<Jet<S>> = true;

// Leading value of a scalar, descending through jet nesting.
inline double scalar_value(double s) { return s; }
inline double scalar_value(Var s) { return s.tape->value(s); }
template <class S>
double scalar_value(const Jet<S>& j) {
  return scalar_value(j.c[0]);
}

// A constant with the structure of `proto` and the given leading value.
inline double lift_like(double v, double) { return v; }
inline Var lift_like(double v, Var proto) { return proto.tape->constant(v); }
template <class S>
Jet<S> lift_like(double v, const Jet<S>& proto);

// Truncated Taylor object in one seed direction. Coefficient j stores the
// raw derivative d^j f (not the Taylor coefficient d^j f / j!). The scalar
// kind S may itself be a Jet (mixed partials) or a tape Var (so jet outputs
// stay differentiable with respect to parameters).
template <class S>
struct Jet {
  int deg = 0;
  std::array<S, 5> c{};

  Jet() = default;

  static Jet constant(S value, int degree, const S& proto) {
    Jet j;
    j.deg = degree;
    j.c[0] = value;
    for (int i = 1; i <= degree; ++i) j.c[i] = lift_like(0.0, proto);
    return j;
  }

  // Seed jet for a variable: value x0 and unit (or scaled) first derivative.
  static Jet seed(S x0, int degree, double d1, const S& proto) {
    if (degree < 0 || degree > 4) throw UnsupportedOrderError("Jet: degree must be in [0,4]");
    Jet j = constant(x0, degree, proto);
    if (degree >= 1) j.c[1] = lift_like(d1, proto);
    return j;
  }
};

namespace detail {

// C(k, j) for k, j <= 4.
inline constexpr double kBinom[5][5] = {
    {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};

template <class S>
void check_degree(const Jet<S>& a, const Jet<S>& b) {
  if (a.deg != b.deg) throw DimensionError("Jet: degree mismatch");
}

}  // namespace detail

template <class S>
Jet<S> lift_like(double v, const Jet<S>& proto) {
  return Jet<S>::constant(lift_like(v, proto.c[0]), proto.deg, proto.c[0]);
}

template <class S>
Jet<S> operator+(const Jet<S>& a, const Jet<S>& b) {
  detail::check_degree(a, b);
  Jet<S> r;
  r.deg = a.deg;
  for (int i = 0; i <= a.deg; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

template <class S>
Jet<S> operator-(const Jet<S>& a, const Jet<S>& b) {
  detail::check_degree(a, b);
  Jet<S> r;
  r.deg = a.deg;
  for (int i = 0; i <= a.deg; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

template <class S>
Jet<S> operator-(const Jet<S>& a) {
  Jet<S> r;
  r.deg = a.deg;
  for (int i = 0; i <= a.deg; ++i) r.c[i] = -a.c[i];
  return r;
}

// Leibniz product with binomial weights (raw-derivative convention).
template <class S>
Jet<S> operator*(const Jet<S>& a, const Jet<S>& b) {
  detail::check_degree(a, b);
  Jet<S> r;
  r.deg = a.deg;
  for (int k = 0; k <= a.deg; ++k) {
    S acc = a.c[0] * b.c[k];
    for (int j = 1; j <= k; ++j) acc = acc + detail::kBinom[k][j] * (a.c[j] * b.c[k - j]);
    r.c[k] = acc;
  }
  return r;
}

// Division by back-substitution through the Leibniz rule: a = r * b.
template <class S>
Jet<S> operator/(const Jet<S>& a, const Jet<S>& b) {
  detail::check_degree(a, b);
  if (scalar_value(b.c[0]) == 0.0)
    throw SingularPointError("Jet division at zero denominator value");
  Jet<S> r;
  r.deg = a.deg;
  r.c[0] = a.c[0] / b.c[0];
  for (int k = 1; k <= a.deg; ++k) {
    S acc = a.c[k];
    for (int j = 0; j < k; ++j) acc = acc - detail::kBinom[k][j] * (r.c[j] * b.c[k - j]);
    r.c[k] = acc / b.c[0];
  }
  return r;
}

// Mixed scalar/jet arithmetic. The scalar operand is degree-0 with respect
// to the jet's seed direction, so products act coefficient-wise.
template <class S, class T>
  requires(!is_jet_v<T>)
Jet<S> operator*(const T& s, const Jet<S>& a) {
  Jet<S> r;
  r.deg = a.deg;
  for (int i = 0; i <= a.deg; ++i) r.c[i] = s * a.c[i];
  return r;
}
template <class S, class T>
  requires(!is_jet_v<T>)
Jet<S> operator*(const Jet<S>& a, const T& s) {
  return s * a;
}
template <class S, class T>
  requires(!is_jet_v<T>)
Jet<S> operator+(const Jet<S>& a, const T& s) {
  Jet<S> r = a;
  r.c[0] = a.c[0] + s;
  return r;
}
template <class S, class T>
  requires(!is_jet_v<T>)
Jet<S> operator+(const T& s, const Jet<S>& a) {
  return a + s;
}
template <class S, class T>
  requires(!is_jet_v<T>)
Jet<S> operator-(const Jet<S>& a, const T& s) {
  Jet<S> r = a;
  r.c[0] = a.c[0] - s;
  return r;
}
template <class S, class T>
  requires(!is_jet_v<T>)
Jet<S> operator-(const T& s, const Jet<S>& a) {
  Jet<S> r = -a;
  r.c[0] = s + r.c[0];
  return r;
}
template <class S, class T>
  requires(!is_jet_v<T>)
Jet<S> operator/(const Jet<S>& a, const T& s) {
  Jet<S> r;
  r.deg = a.deg;
  for (int i = 0; i <= a.deg; ++i) r.c[i] = a.c[i] / s;
  return r;
}
template <class S, class T>
  requires(!is_jet_v<T>)
Jet<S> operator/(const T& s, const Jet<S>& a) {
  return Jet<S>::constant(lift_like(1.0, a.c[0]) * s, a.deg, a.c[0]) / a;
}

// Composition h = phi(u) for raw-derivative coefficients (Faa di Bruno up to
// degree 4). phi[n] must hold phi^(n)(u0).
template <class S>
Jet<S> jet_compose(const Jet<S>& u, const std::array<S, 5>& phi) {
  Jet<S> h;
  h.deg = u.deg;
  h.c[0] = phi[0];
  if (u.deg >= 1) h.c[1] = phi[1] * u.c[1];
  if (u.deg >= 2) h.c[2] = phi[1] * u.c[2] + phi[2] * (u.c[1] * u.c[1]);
  if (u.deg >= 3)
    h.c[3] = phi[1] * u.c[3] + 3.0 * (phi[2] * (u.c[1] * u.c[2])) +
             phi[3] * (u.c[1] * u.c[1] * u.c[1]);
  if (u.deg >= 4) {
    const S u1sq = u.c[1] * u.c[1];
    h.c[4] = phi[1] * u.c[4] + phi[2] * (4.0 * (u.c[1] * u.c[3]) + 3.0 * (u.c[2] * u.c[2])) +
             6.0 * (phi[3] * (u1sq * u.c[2])) + phi[4] * (u1sq * u1sq);
  }
  return h;
}

template <class S>
Jet<S> tanh(const Jet<S>& a) {
  using std::tanh;
  std::array<S, 5> phi{};
  const S t = tanh(a.c[0]);
  phi[0] = t;
  if (a.deg >= 1) phi[1] = lift_like(1.0, a.c[0]) - t * t;  // sech^2
  if (a.deg >= 2) phi[2] = -2.0 * (t * phi[1]);
  if (a.deg >= 3) phi[3] = (6.0 * (t * t) - 2.0) * phi[1];
  if (a.deg >= 4) phi[4] = (16.0 * t - 24.0 * (t * t * t)) * phi[1];
  return jet_compose(a, phi);
}

template <class S>
Jet<S> sin(const Jet<S>& a) {
  using std::cos;
  using std::sin;
  std::array<S, 5> phi{};
  const S sv = sin(a.c[0]);
  const S cv = cos(a.c[0]);
  phi[0] = sv;
  if (a.deg >= 1) phi[1] = cv;
  if (a.deg >= 2) phi[2] = -sv;
  if (a.deg >= 3) phi[3] = -cv;
  if (a.deg >= 4) phi[4] = sv;
  return jet_compose(a, phi);
}

template <class S>
Jet<S> cos(const Jet<S>& a) {
  using std::cos;
  using std::sin;
  std::array<S, 5> phi{};
  const S sv = sin(a.c[0]);
  const S cv = cos(a.c[0]);
  phi[0] = cv;
  if (a.deg >= 1) phi[1] = -sv;
  if (a.deg >= 2) phi[2] = -cv;
  if (a.deg >= 3) phi[3] = sv;
  if (a.deg >= 4) phi[4] = cv;
  return jet_compose(a, phi);
}

template <class S>
Jet<S> exp(const Jet<S>& a) {
  using std::exp;
  std::array<S, 5> phi{};
  const S e = exp(a.c[0]);
  for (int i = 0; i <= a.deg; ++i) phi[i] = e;
  return jet_compose(a, phi);
}

// Integer power by repeated multiplication (left-to-right for a fixed
// evaluation order). Negative exponents go through jet division.
template <class S>
Jet<S> powi(const Jet<S>& a, int n) {
  if (n < 0) return lift_like(1.0, a) / powi(a, -n);
  if (n == 0) return lift_like(1.0, a);
  Jet<S> r = a;
  for (int i = 1; i < n; ++i) r = r * a;
  return r;
}

inline double powi(double a, int n) {
  if (n < 0) return 1.0 / powi(a, -n);
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= a;
  return r;
}

}  // namespace capinn::ad
