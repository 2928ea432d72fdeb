#include "capinn/pde/problem.hpp"

#include <cmath>
#include <numbers>

namespace capinn::pde {

using ad::Jet;
using ad::Var;

namespace {
constexpr double kPi = std::numbers::pi;
}

void Problem::exact(std::span<const double>, std::span<double>) const {
  throw ConfigError(info_.name + ": no analytic solution available");
}
void Problem::exact_jet1(std::span<const Jet<double>>, std::span<Jet<double>>) const {
  throw ConfigError(info_.name + ": no analytic solution available");
}
void Problem::exact_jet2(std::span<const Jet<Jet<double>>>, std::span<Jet<Jet<double>>>) const {
  throw ConfigError(info_.name + ": no analytic solution available");
}

void Problem::boundary_target(std::span<const double> xt, std::span<double> out) const {
  exact(xt, out);
}

void Problem::diffusion_coeffs(std::span<double>) const {
  throw ConfigError(info_.name + ": no reference integrator pieces");
}
void Problem::reaction(std::span<const double>, std::span<double>) const {
  throw ConfigError(info_.name + ": no reference integrator pieces");
}

// ----------------------------------------------------------------- heat ----
// u_t - Lap(u) = f on [-1,1]^d x [0,1], manufactured from
// u = cos((1/d) sum x_i) exp(-t), which gives f = (1/d - 1) u.

class HeatProblem final : public Problem {
 public:
  explicit HeatProblem(int dim) {
    info_.name = "heat" + std::to_string(dim) + "d";
    info_.spatial_dim = dim;
    info_.outputs = 1;
    info_.lo.assign(dim, -1.0);
    info_.hi.assign(dim, 1.0);
    info_.t0 = 0.0;
    info_.t1 = 1.0;
    info_.lambda_f = 1.0;
    info_.lambda_b = 10.0;
    info_.lambda_i = 10.0;
    info_.has_exact = true;
    layout_.comps = 1;
    layout_.time_order = 1;
    layout_.space_order.assign(dim, 2);
  }

  template <class S>
  S exact_t(std::span<const S> xt) const {
    using ad::cos;
    using ad::exp;
    using std::cos;
    using std::exp;
    const int d = info_.spatial_dim;
    S acc = xt[0];
    for (int i = 1; i < d; ++i) acc = acc + xt[i];
    return cos((1.0 / d) * acc) * exp(-1.0 * xt[d]);
  }

  template <class S>
  void residual_t(std::span<const S> xt, const DerivTable<S>& t, std::span<S> out) const {
    const int d = info_.spatial_dim;
    S lap = t.dx(0, 0, 2);
    for (int a = 1; a < d; ++a) lap = lap + t.dx(0, a, 2);
    const S f = (1.0 / d - 1.0) * exact_t<S>(xt);
    out[0] = t.dt(0) - lap - f;
  }

  void residual(std::span<const double> xt, const DerivTable<double>& t,
                std::span<double> out) const override {
    residual_t<double>(xt, t, out);
  }
  void residual(std::span<const Var> xt, const DerivTable<Var>& t,
                std::span<Var> out) const override {
    residual_t<Var>(xt, t, out);
  }
  void initial(std::span<const double> x, std::span<double> out) const override {
    std::vector<double> xt(x.begin(), x.end());
    xt.push_back(info_.t0);
    out[0] = exact_t<double>(std::span<const double>(xt));
  }
  void exact(std::span<const double> xt, std::span<double> out) const override {
    out[0] = exact_t<double>(xt);
  }
  void exact_jet1(std::span<const Jet<double>> xt, std::span<Jet<double>> out) const override {
    out[0] = exact_t<Jet<double>>(xt);
  }
  void exact_jet2(std::span<const Jet<Jet<double>>> xt,
                  std::span<Jet<Jet<double>>> out) const override {
    out[0] = exact_t<Jet<Jet<double>>>(xt);
  }
};

// -------------------------------------------------------------- burgers ----
// Viscous Burgers u_t + u u_x = nu u_xx on [-1,1] x [0,1] with
// u(x,0) = -sin(pi x) and u(+-1,t) = 0. Diagnostic setup; no analytic
// solution is shipped.

class BurgersProblem final : public Problem {
 public:
  BurgersProblem() {
    info_.name = "burgers";
    info_.spatial_dim = 1;
    info_.outputs = 1;
    info_.lo = {-1.0};
    info_.hi = {1.0};
    info_.t1 = 1.0;
    info_.lambda_f = 1.0;
    info_.lambda_b = 1.0;
    info_.lambda_i = 1.0;
    layout_.comps = 1;
    layout_.time_order = 1;
    layout_.space_order = {2};
  }

  static constexpr double kNu = 0.01 / kPi;

  template <class S>
  void residual_t(std::span<const S>, const DerivTable<S>& t, std::span<S> out) const {
    out[0] = t.dt(0) + t.value(0) * t.dx(0, 0, 1) - kNu * t.dx(0, 0, 2);
  }

  void residual(std::span<const double> xt, const DerivTable<double>& t,
                std::span<double> out) const override {
    residual_t<double>(xt, t, out);
  }
  void residual(std::span<const Var> xt, const DerivTable<Var>& t,
                std::span<Var> out) const override {
    residual_t<Var>(xt, t, out);
  }
  void initial(std::span<const double> x, std::span<double> out) const override {
    out[0] = -std::sin(kPi * x[0]);
  }
  void boundary_target(std::span<const double>, std::span<double> out) const override {
    out[0] = 0.0;
  }
};

// ----------------------------------------------------------- gray-scott ----
// Reaction-diffusion system on [-50,50], periodic via Fourier embedding:
//   u_t - e1 u_xx - b(1-u) + u v^2 = 0
//   v_t - e2 v_xx + (b+k) v + u v^2 = 0

class GrayScottProblem final : public Problem {
 public:
  explicit GrayScottProblem(double horizon) {
    info_.name = "gray_scott";
    info_.spatial_dim = 1;
    info_.outputs = 2;
    info_.lo = {-50.0};
    info_.hi = {50.0};
    info_.t1 = horizon;
    info_.lambda_f = 1.0;
    info_.lambda_b = 0.0;
    info_.lambda_i = 100.0;
    info_.hard_periodic_bc = true;
    info_.fourier_period = 100.0;
    layout_.comps = 2;
    layout_.time_order = 1;
    layout_.space_order = {2};
  }

  static constexpr double kEps1 = 1.0, kEps2 = 0.01, kB = 0.02, kK = 0.0562;

  template <class S>
  void residual_t(std::span<const S>, const DerivTable<S>& t, std::span<S> out) const {
    const S& u = t.value(0);
    const S& v = t.value(1);
    const S uvv = u * (v * v);
    out[0] = t.dt(0) - kEps1 * t.dx(0, 0, 2) - kB * (1.0 - u) + uvv;
    out[1] = t.dt(1) - kEps2 * t.dx(1, 0, 2) + (kB + kK) * v + uvv;
  }

  void residual(std::span<const double> xt, const DerivTable<double>& t,
                std::span<double> out) const override {
    residual_t<double>(xt, t, out);
  }
  void residual(std::span<const Var> xt, const DerivTable<Var>& t,
                std::span<Var> out) const override {
    residual_t<Var>(xt, t, out);
  }
  void initial(std::span<const double> x, std::span<double> out) const override {
    const double s = std::sin(kPi * (x[0] - 50.0) / 100.0);
    const double s4 = s * s * s * s;
    out[0] = 1.0 - s4 / 2.0;
    out[1] = s4 / 4.0;
  }
  bool has_reference_rhs() const override { return true; }
  void diffusion_coeffs(std::span<double> out) const override {
    out[0] = kEps1;
    out[1] = kEps2;
  }
  void reaction(std::span<const double> u, std::span<double> out) const override {
    const double uvv = u[0] * u[1] * u[1];
    out[0] = kB * (1.0 - u[0]) - uvv;
    out[1] = -(kB + kK) * u[1] - uvv;
  }
};

// -------------------------------------------------- belousov-zhabotinsky ----
// Three-species system on [-1,1], periodic via Fourier embedding:
//   u_t - e1 u_xx + u + v - uv - u^2 = 0
//   v_t - e2 v_xx + w - v - uv     = 0
//   w_t - e1 w_xx + u - w          = 0
// (the w equation shares e1, as printed in the system definition)

class BzProblem final : public Problem {
 public:
  explicit BzProblem(double horizon) {
    info_.name = "bz";
    info_.spatial_dim = 1;
    info_.outputs = 3;
    info_.lo = {-1.0};
    info_.hi = {1.0};
    info_.t1 = horizon;
    info_.lambda_f = 1.0;
    info_.lambda_b = 0.0;
    info_.lambda_i = 100.0;
    info_.hard_periodic_bc = true;
    info_.fourier_period = 2.0;
    layout_.comps = 3;
    layout_.time_order = 1;
    layout_.space_order = {2};
  }

  static constexpr double kEps1 = 1e-5, kEps2 = 2e-5;

  template <class S>
  void residual_t(std::span<const S>, const DerivTable<S>& t, std::span<S> out) const {
    const S& u = t.value(0);
    const S& v = t.value(1);
    const S& w = t.value(2);
    out[0] = t.dt(0) - kEps1 * t.dx(0, 0, 2) + u + v - u * v - u * u;
    out[1] = t.dt(1) - kEps2 * t.dx(1, 0, 2) + w - v - u * v;
    out[2] = t.dt(2) - kEps1 * t.dx(2, 0, 2) + u - w;
  }

  void residual(std::span<const double> xt, const DerivTable<double>& t,
                std::span<double> out) const override {
    residual_t<double>(xt, t, out);
  }
  void residual(std::span<const Var> xt, const DerivTable<Var>& t,
                std::span<Var> out) const override {
    residual_t<Var>(xt, t, out);
  }
  void initial(std::span<const double> x, std::span<double> out) const override {
    out[0] = std::exp(-100.0 * (x[0] + 0.5) * (x[0] + 0.5));
    out[1] = std::exp(-100.0 * x[0] * x[0]);
    out[2] = std::exp(-100.0 * (x[0] - 0.5) * (x[0] - 0.5));
  }
  bool has_reference_rhs() const override { return true; }
  void diffusion_coeffs(std::span<double> out) const override {
    out[0] = kEps1;
    out[1] = kEps2;
    out[2] = kEps1;
  }
  void reaction(std::span<const double> u, std::span<double> out) const override {
    out[0] = -u[0] - u[1] + u[0] * u[1] + u[0] * u[0];
    out[1] = -u[2] + u[1] + u[0] * u[1];
    out[2] = -u[0] + u[2];
  }
};

// ---------------------------------------------------------------- 2D KS ----
// Kuramoto-Sivashinsky system with biharmonic dissipation on [0,2]^2 x [0,1].
// Sources f1, f2 are manufactured from the exact solution family
//   u = -cos(pi x) sin(pi y) E,  v = sin(pi x) cos(pi y) E,
//   E = exp(-pi^2 lam t / 4),
// for which u_t = -(pi^2 lam/4) u, Lap u = -2 pi^2 u, biharmonic = 4 pi^4 u
// and the advection collapses to -(pi/2) sin(2 pi x) E^2 (resp. y for v).

class Ks2dProblem final : public Problem {
 public:
  Ks2dProblem() {
    info_.name = "ks2d";
    info_.spatial_dim = 2;
    info_.outputs = 2;
    info_.lo = {0.0, 0.0};
    info_.hi = {2.0, 2.0};
    info_.t1 = 1.0;
    info_.lambda_f = 1.0;
    info_.lambda_b = 20.0;
    info_.lambda_i = 20.0;
    info_.has_exact = true;
    layout_.comps = 2;
    layout_.time_order = 1;
    layout_.space_order = {4, 4};
    layout_.mixed = {{0, 1}};
  }

  static constexpr double kLam = 0.01;

  template <class S>
  void exact_t(std::span<const S> xt, std::span<S> out) const {
    using ad::cos;
    using ad::exp;
    using ad::sin;
    using std::cos;
    using std::exp;
    using std::sin;
    const S e = exp((-kPi * kPi * kLam / 4.0) * xt[2]);
    out[0] = -1.0 * (cos(kPi * xt[0]) * (sin(kPi * xt[1]) * e));
    out[1] = sin(kPi * xt[0]) * (cos(kPi * xt[1]) * e);
  }

  template <class S>
  void residual_t(std::span<const S> xt, const DerivTable<S>& t, std::span<S> out) const {
    using ad::exp;
    using ad::sin;
    using std::exp;
    using std::sin;
    const S& u = t.value(0);
    const S& v = t.value(1);
    const double c4 = 4.0 * kPi * kPi * kPi * kPi;
    const double sc = c4 - 2.0 * kPi * kPi * kLam - kPi * kPi * kLam / 4.0;
    std::vector<S> ex(2, xt[0]);
    exact_t<S>(xt, std::span<S>(ex));
    const S e2 = exp((-kPi * kPi * kLam / 2.0) * xt[2]);
    const S f1 = sc * ex[0] - (kPi / 2.0) * (sin((2.0 * kPi) * xt[0]) * e2);
    const S f2 = sc * ex[1] - (kPi / 2.0) * (sin((2.0 * kPi) * xt[1]) * e2);

    for (int c = 0; c < 2; ++c) {
      const S adv = u * t.dx(c, 0, 1) + v * t.dx(c, 1, 1);
      const S lap = t.dx(c, 0, 2) + t.dx(c, 1, 2);
      const S biharm = t.dx(c, 0, 4) + 2.0 * t.mixed22(c, 0, 1) + t.dx(c, 1, 4);
      out[c] = t.dt(c) + adv + kLam * lap + biharm - (c == 0 ? f1 : f2);
    }
  }

  void residual(std::span<const double> xt, const DerivTable<double>& t,
                std::span<double> out) const override {
    residual_t<double>(xt, t, out);
  }
  void residual(std::span<const Var> xt, const DerivTable<Var>& t,
                std::span<Var> out) const override {
    residual_t<Var>(xt, t, out);
  }
  void initial(std::span<const double> x, std::span<double> out) const override {
    std::vector<double> xt(x.begin(), x.end());
    xt.push_back(info_.t0);
    exact_t<double>(std::span<const double>(xt), out);
  }
  void exact(std::span<const double> xt, std::span<double> out) const override {
    exact_t<double>(xt, out);
  }
  void exact_jet1(std::span<const Jet<double>> xt, std::span<Jet<double>> out) const override {
    exact_t<Jet<double>>(xt, out);
  }
  void exact_jet2(std::span<const Jet<Jet<double>>> xt,
                  std::span<Jet<Jet<double>>> out) const override {
    exact_t<Jet<Jet<double>>>(xt, out);
  }
};

std::unique_ptr<Problem> make_problem(const std::string& id, const ProblemOptions& opts) {
  if (id == "heat") return std::make_unique<HeatProblem>(opts.heat_dim);
  if (id == "burgers") return std::make_unique<BurgersProblem>();
  if (id == "gray_scott") return std::make_unique<GrayScottProblem>(opts.horizon.value_or(20.0));
  if (id == "bz") return std::make_unique<BzProblem>(opts.horizon.value_or(3.0));
  if (id == "ks2d") return std::make_unique<Ks2dProblem>();
  throw ConfigError("unknown problem id: " + id);
}

}  // namespace capinn::pde
