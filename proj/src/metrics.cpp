#include "capinn/pde/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "capinn/errors.hpp"

namespace capinn::pde {

double relative_l2(std::span<const double> pred, std::span<const double> exact) {
  if (pred.size() != exact.size() || pred.empty())
    throw DimensionError("relative_l2: length mismatch or empty input");
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - exact[i];
    num += d * d;
    den += exact[i] * exact[i];
  }
  if (den == 0.0) throw std::domain_error("relative_l2: exact solution has zero norm");
  return std::sqrt(num) / std::sqrt(den);
}

double linf(std::span<const double> pred, std::span<const double> exact) {
  if (pred.size() != exact.size() || pred.empty())
    throw DimensionError("linf: length mismatch or empty input");
  double m = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) m = std::max(m, std::abs(pred[i] - exact[i]));
  return m;
}

}  // namespace capinn::pde
