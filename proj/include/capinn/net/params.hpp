#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "capinn/errors.hpp"

namespace capinn::net {

struct TensorDesc {
  std::string name;
  int rows = 0;
  int cols = 1;        // 1 for vectors
  bool is_matrix = false;
  size_t offset = 0;

  size_t size() const { return size_t(rows) * cols; }
};

// Named collection of parameter tensors over one contiguous buffer. The flat
// view and the per-tensor views alias the same storage, so they can never
// disagree.
class ParamSet {
 public:
  ParamSet() = default;
  explicit ParamSet(std::vector<TensorDesc> descs) : descs_(std::move(descs)) {
    size_t total = 0;
    for (auto& d : descs_) {
      if (d.offset != total) throw DimensionError("ParamSet: non-contiguous layout");
      total += d.size();
    }
    flat_.assign(total, 0.0);
  }

  static ParamSet zeros_like(const ParamSet& other) { return ParamSet(other.descs_); }

  size_t count() const { return flat_.size(); }
  int num_tensors() const { return int(descs_.size()); }
  const TensorDesc& desc(int i) const { return descs_[i]; }
  const std::vector<TensorDesc>& descs() const { return descs_; }

  std::span<double> flat() { return flat_; }
  std::span<const double> flat() const { return flat_; }
  std::span<double> tensor(int i) { return {flat_.data() + descs_[i].offset, descs_[i].size()}; }
  std::span<const double> tensor(int i) const {
    return {flat_.data() + descs_[i].offset, descs_[i].size()};
  }

  bool same_layout(const ParamSet& o) const {
    if (descs_.size() != o.descs_.size()) return false;
    for (size_t i = 0; i < descs_.size(); ++i) {
      const auto& a = descs_[i];
      const auto& b = o.descs_[i];
      if (a.name != b.name || a.rows != b.rows || a.cols != b.cols ||
          a.is_matrix != b.is_matrix || a.offset != b.offset)
        return false;
    }
    return true;
  }

  void check_same_layout(const ParamSet& o) const {
    if (!same_layout(o)) throw StateError("ParamSet: layout mismatch");
  }

  double dot(const ParamSet& o) const {
    check_same_layout(o);
    double s = 0.0;
    for (size_t i = 0; i < flat_.size(); ++i) s += flat_[i] * o.flat_[i];
    return s;
  }

  double norm() const { return std::sqrt(dot(*this)); }

  double inf_norm() const {
    double m = 0.0;
    for (double v : flat_) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    for (double v : flat_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  // this += a * x
  void axpy(double a, const ParamSet& x) {
    check_same_layout(x);
    for (size_t i = 0; i < flat_.size(); ++i) flat_[i] += a * x.flat_[i];
  }

  void fill(double v) { std::fill(flat_.begin(), flat_.end(), v); }

 private:
  std::vector<TensorDesc> descs_;
  std::vector<double> flat_;
};

}  // namespace capinn::net
