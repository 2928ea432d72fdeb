#pragma once

#include <span>

namespace capinn::pde {

// sqrt(sum |pred-exact|^2) / sqrt(sum |exact|^2); throws std::domain_error
// when the exact vector has zero norm.
double relative_l2(std::span<const double> pred, std::span<const double> exact);

// max_k |pred_k - exact_k|
double linf(std::span<const double> pred, std::span<const double> exact);

}  // namespace capinn::pde
