#pragma once

#include <span>
#include <vector>

#include "capinn/ad/jet.hpp"
#include "capinn/ad/tape.hpp"

namespace capinn::ad {

// Forward-mode evaluation of a univariate function: coefficient j of the
// result is d^j f / dx^j at x0.
template <class F>
Jet<double> jet_eval(F&& f, double x0, int degree) {
  if (degree < 0 || degree > 4) throw UnsupportedOrderError("jet_eval: degree must be in [0,4]");
  return f(Jet<double>::seed(x0, degree, 1.0, 0.0));
}

namespace detail {

template <int D>
struct NestedJet {
  using type = Jet<typename NestedJet<D - 1>::type>;
};
template <>
struct NestedJet<0> {
  using type = double;
};

// Builds nested-jet inputs (one nesting level per differentiated variable)
// and extracts the raw mixed derivative from the nested output.
template <int D>
struct NestBuilder {
  using S = typename NestedJet<D>::type;
  using Inner = typename NestedJet<D - 1>::type;

  static S make(double value, int var_level, std::span<const int> degs) {
    Inner inner = NestBuilder<D - 1>::make(value, var_level, degs);
    Inner proto = NestBuilder<D - 1>::make(0.0, -1, degs);
    S j = S::constant(inner, degs[D - 1], proto);
    if (var_level == D - 1 && degs[D - 1] >= 1)
      j.c[1] = NestBuilder<D - 1>::make(1.0, -1, degs);
    return j;
  }

  static double extract(const S& s, std::span<const int> degs) {
    return NestBuilder<D - 1>::extract(s.c[degs[D - 1]], degs);
  }
};

template <>
struct NestBuilder<0> {
  static double make(double value, int, std::span<const int>) { return value; }
  static double extract(double s, std::span<const int>) { return s; }
};

template <int D, class F>
double run_mixed(F&& f, std::span<const double> point, std::span<const int> var_index,
                 std::span<const int> degs) {
  using S = typename NestedJet<D>::type;
  std::vector<S> xs(point.size());
  for (size_t i = 0; i < point.size(); ++i) {
    int level = -1;
    for (size_t l = 0; l < var_index.size(); ++l)
      if (var_index[l] == int(i)) level = int(l);
    xs[i] = NestBuilder<D>::make(point[i], level, degs);
  }
  S out = f(std::span<const S>(xs.data(), xs.size()));
  return NestBuilder<D>::extract(out, degs);
}

}  // namespace detail

// Pure or mixed partial derivative via nested jets: orders[i] is the
// derivative order with respect to point[i]; the total order must not
// exceed 4. The callable is invoked with one nesting level per variable
// that has a nonzero order.
template <class F>
double mixed_partial(F&& f, std::span<const double> point, std::span<const int> orders) {
  if (orders.size() != point.size())
    throw DimensionError("mixed_partial: orders/point length mismatch");
  int total = 0;
  std::vector<int> vars, degs;
  for (size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 0 || orders[i] > 4)
      throw UnsupportedOrderError("mixed_partial: per-variable order must be in [0,4]");
    total += orders[i];
    if (orders[i] > 0) {
      vars.push_back(int(i));
      degs.push_back(orders[i]);
    }
  }
  if (total > 4) throw UnsupportedOrderError("mixed_partial: total order exceeds 4");

  switch (vars.size()) {
    case 0: {
      std::vector<int> v0{0}, d0{0};
      return detail::run_mixed<1>(f, point, v0, d0);
    }
    case 1: return detail::run_mixed<1>(f, point, vars, degs);
    case 2: return detail::run_mixed<2>(f, point, vars, degs);
    case 3: return detail::run_mixed<3>(f, point, vars, degs);
    case 4: return detail::run_mixed<4>(f, point, vars, degs);
    default: throw UnsupportedOrderError("mixed_partial: too many distinct variables");
  }
}

struct GradResult {
  double value = 0.0;
  std::vector<double> gradient;
};

// Reverse-mode gradient of a scalar-valued function of a flat parameter
// vector. The callable receives the tape and one Var per parameter; the
// forward value is shared with the backward pass.
template <class F>
GradResult grad(F&& f, std::span<const double> theta) {
  Tape tape;
  std::vector<Var> params;
  params.reserve(theta.size());
  for (double v : theta) params.push_back(tape.input(v));
  Var out = f(tape, std::span<const Var>(params.data(), params.size()));
  std::vector<double> adj = tape.backward(out);
  GradResult r;
  r.value = tape.value(out);
  r.gradient.reserve(params.size());
  for (Var p : params) r.gradient.push_back(adj[p.id]);
  return r;
}

}  // namespace capinn::ad
