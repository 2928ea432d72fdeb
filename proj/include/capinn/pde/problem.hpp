#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capinn/ad/jet.hpp"
#include "capinn/errors.hpp"

namespace capinn::pde {

// Which derivatives of the network output a residual consumes. Slots per
// component: value, d/dt (when time_order = 1), pure spatial derivatives up
// to space_order[axis], then one slot per mixed d2/dx2 d2/dy2 pair.
struct DerivSlotLayout {
  int comps = 1;
  int time_order = 0;
  std::vector<int> space_order;
  std::vector<std::pair<int, int>> mixed;

  int slots_per_comp() const {
    int n = 1 + time_order;
    for (int o : space_order) n += o;
    n += int(mixed.size());
    return n;
  }
  int slot_value() const { return 0; }
  int slot_dt() const {
    if (time_order == 0) throw UnsupportedOrderError("no time derivative in layout");
    return 1;
  }
  int slot_dx(int axis, int order) const {
    if (order < 1 || order > space_order[axis])
      throw UnsupportedOrderError("spatial order not requested in layout");
    int base = 1 + time_order;
    for (int a = 0; a < axis; ++a) base += space_order[a];
    return base + order - 1;
  }
  int slot_mixed(int ax, int ay) const {
    int base = 1 + time_order;
    for (int o : space_order) base += o;
    for (size_t i = 0; i < mixed.size(); ++i)
      if ((mixed[i].first == ax && mixed[i].second == ay) ||
          (mixed[i].first == ay && mixed[i].second == ax))
        return base + int(i);
    throw UnsupportedOrderError("mixed pair not requested in layout");
  }
};

// Dense table of derivative values at one point, generic over the scalar
// kind (double for evaluation, Var when the loss must stay differentiable).
template <class S>
struct DerivTable {
  const DerivSlotLayout* layout = nullptr;
  std::vector<S> data;  // comps * slots_per_comp entries

  void init(const DerivSlotLayout& l) {
    layout = &l;
    data.assign(size_t(l.comps) * l.slots_per_comp(), S{});
  }
  S& at(int comp, int slot) { return data[size_t(comp) * layout->slots_per_comp() + slot]; }
  const S& at(int comp, int slot) const {
    return data[size_t(comp) * layout->slots_per_comp() + slot];
  }
  const S& value(int comp) const { return at(comp, layout->slot_value()); }
  const S& dt(int comp) const { return at(comp, layout->slot_dt()); }
  const S& dx(int comp, int axis, int order = 1) const {
    return at(comp, layout->slot_dx(axis, order));
  }
  const S& mixed22(int comp, int ax, int ay) const {
    return at(comp, layout->slot_mixed(ax, ay));
  }
  S& at(int comp, int slot, int) { return at(comp, slot); }
};

// Row-major point storage; each row is (x_0..x_{d-1}, t).
struct PointSet {
  int dim = 0;
  int n = 0;
  std::vector<double> xt;

  std::span<const double> row(int i) const { return {xt.data() + size_t(i) * dim, size_t(dim)}; }
  std::span<double> row(int i) { return {xt.data() + size_t(i) * dim, size_t(dim)}; }
  void resize(int count, int d) {
    n = count;
    dim = d;
    xt.assign(size_t(n) * d, 0.0);
  }
};

// A benchmark PDE: residual operator over a derivative table, initial data,
// optional analytic solution, loss weights and domain geometry.
class Problem {
 public:
  struct Info {
    std::string name;
    int spatial_dim = 1;
    int outputs = 1;
    std::vector<double> lo, hi;  // spatial bounds
    double t0 = 0.0, t1 = 1.0;
    double lambda_f = 1.0, lambda_b = 1.0, lambda_i = 1.0;
    bool hard_periodic_bc = false;  // boundary handled by Fourier embedding
    double fourier_period = 0.0;    // embedding period when hard-constrained
    bool has_exact = false;
  };

  virtual ~Problem() = default;
  const Info& info() const { return info_; }
  const DerivSlotLayout& deriv_layout() const { return layout_; }

  virtual void residual(std::span<const double> xt, const DerivTable<double>& d,
                        std::span<double> out) const = 0;
  virtual void residual(std::span<const ad::Var> xt, const DerivTable<ad::Var>& d,
                        std::span<ad::Var> out) const = 0;

  // Initial data u(x, t0); overwritten by window handoff under time marching.
  virtual void initial(std::span<const double> x, std::span<double> out) const = 0;

  virtual void exact(std::span<const double> xt, std::span<double> out) const;
  virtual void exact_jet1(std::span<const ad::Jet<double>> xt,
                          std::span<ad::Jet<double>> out) const;
  virtual void exact_jet2(std::span<const ad::Jet<ad::Jet<double>>> xt,
                          std::span<ad::Jet<ad::Jet<double>>> out) const;

  // Dirichlet boundary data; defaults to the exact solution when available.
  virtual void boundary_target(std::span<const double> xt, std::span<double> out) const;

  // Method-of-lines pieces for the shipped reference integrator
  // (1-D reaction-diffusion systems only).
  virtual bool has_reference_rhs() const { return false; }
  virtual void diffusion_coeffs(std::span<double> out) const;
  virtual void reaction(std::span<const double> u, std::span<double> out) const;

 protected:
  Info info_;
  DerivSlotLayout layout_;
};

struct ProblemOptions {
  int heat_dim = 2;                    // heat only
  std::optional<double> horizon;       // override t1 (desk-scale windows)
};

// Known ids: heat, burgers, gray_scott, bz, ks2d.
std::unique_ptr<Problem> make_problem(const std::string& id, const ProblemOptions& opts = {});

}  // namespace capinn::pde
