#pragma once

// Finite-difference oracles shared by the unit and acceptance suites. These
// deliberately avoid the jet/tape code paths they are used to check.

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace oracles {

// 7-point central stencils; O(h^6) for orders 1-2, O(h^4) for orders 3-4.
inline double central_diff_raw(const std::function<double(double)>& f, double x, int order,
                               double h) {
  static const std::array<std::array<double, 7>, 4> kCoef = {{
      {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60},
      {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90},
      {1.0 / 8, -1.0, 13.0 / 8, 0.0, -13.0 / 8, 1.0, -1.0 / 8},
      {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6},
  }};
  const auto& c = kCoef[order - 1];
  double acc = 0.0;
  for (int k = -3; k <= 3; ++k) acc += c[k + 3] * f(x + k * h);
  return acc / std::pow(h, order);
}

// Richardson-extrapolated central difference. One level for orders 1-2
// (already O(h^6) raw); two levels for orders 3-4.
inline double central_diff(const std::function<double(double)>& f, double x, int order,
                           double h = 0.1) {
  if (order <= 2) {
    const double d1 = central_diff_raw(f, x, order, h);
    const double d2 = central_diff_raw(f, x, order, h / 2.0);
    return (64.0 * d2 - d1) / 63.0;
  }
  const double d1 = central_diff_raw(f, x, order, h);
  const double d2 = central_diff_raw(f, x, order, h / 2.0);
  const double d3 = central_diff_raw(f, x, order, h / 4.0);
  const double r1 = (16.0 * d2 - d1) / 15.0;
  const double r2 = (16.0 * d3 - d2) / 15.0;
  return (64.0 * r2 - r1) / 63.0;
}

// Mixed d^2/dx^2 d^2/dy^2 by nesting second-derivative stencils.
inline double central_diff_2x2y(const std::function<double(double, double)>& f, double x,
                                double y, double h = 0.1) {
  auto d2y = [&](double xv) {
    return central_diff_raw([&](double yv) { return f(xv, yv); }, y, 2, h);
  };
  return central_diff_raw(d2y, x, 2, h);
}

// Plain 2-point central difference of a multivariate scalar function.
inline std::vector<double> central_gradient(const std::function<double(std::span<const double>)>& f,
                                            std::span<const double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  std::vector<double> p(x.begin(), x.end());
  for (size_t i = 0; i < x.size(); ++i) {
    const double x0 = p[i];
    p[i] = x0 + h;
    const double fp = f(p);
    p[i] = x0 - h;
    const double fm = f(p);
    p[i] = x0;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Componentwise relative error with a floor tied to the vector scale, so
// near-zero components do not blow up the ratio.
inline double max_rel_error(std::span<const double> a, std::span<const double> b) {
  double amax = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    amax = std::max(amax, std::max(std::abs(a[i]), std::abs(b[i])));
  const double floor = 1e-3 * amax + 1e-300;
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / (std::max(std::abs(a[i]), std::abs(b[i])) + floor));
  return worst;
}

inline double rel_error(double a, double b) {
  return std::abs(a - b) / (std::max(std::abs(a), std::abs(b)) + 1e-12);
}

}  // namespace oracles
