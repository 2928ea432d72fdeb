#pragma once

#include "capinn/ad/functions.hpp"
#include "capinn/net/mlp.hpp"
#include "capinn/pde/problem.hpp"
#include "capinn/pde/sampling.hpp"

namespace capinn::pde {

struct LossParts {
  double total = 0.0, lf = 0.0, lb = 0.0, li = 0.0;
};

// Derivative table of the network at one point, built from directional jet
// passes (plus nested jets for mixed second pairs). The scalar kind P is
// double for plain evaluation or Var for parameter-differentiable losses.
template <class P>
void network_deriv_table(const Problem& prob, const net::MlpSpec& spec,
                         const net::Params<P>& params, std::span<const P> xt,
                         DerivTable<P>& table) {
  using ad::Jet;
  const DerivSlotLayout& lay = prob.deriv_layout();
  const int d = prob.info().spatial_dim;
  const int m = prob.info().outputs;
  table.init(lay);

  std::vector<Jet<P>> in(d + 1), out(m);
  // value + time pass
  {
    const int deg = lay.time_order;
    for (int a = 0; a <= d; ++a) in[a] = Jet<P>::seed(xt[a], deg, a == d ? 1.0 : 0.0, xt[0]);
    net::forward(spec, params, std::span<const Jet<P>>(in), std::span<Jet<P>>(out));
    for (int c = 0; c < m; ++c) {
      table.at(c, lay.slot_value()) = out[c].c[0];
      if (lay.time_order >= 1) table.at(c, lay.slot_dt()) = out[c].c[1];
    }
  }
  // pure spatial passes
  for (int axis = 0; axis < d; ++axis) {
    const int deg = lay.space_order[axis];
    if (deg == 0) continue;
    for (int a = 0; a <= d; ++a) in[a] = Jet<P>::seed(xt[a], deg, a == axis ? 1.0 : 0.0, xt[0]);
    net::forward(spec, params, std::span<const Jet<P>>(in), std::span<Jet<P>>(out));
    for (int c = 0; c < m; ++c)
      for (int o = 1; o <= deg; ++o) table.at(c, lay.slot_dx(axis, o)) = out[c].c[o];
  }
  // mixed d2/d2 pairs via nested jets
  if (!lay.mixed.empty()) {
    using J = Jet<P>;
    using JJ = Jet<J>;
    const J inner_zero = J::constant(ad::lift_like(0.0, xt[0]), 2, xt[0]);
    const J inner_one = J::constant(ad::lift_like(1.0, xt[0]), 2, xt[0]);
    std::vector<JJ> jin(d + 1), jout(m);
    for (auto [ax, ay] : lay.mixed) {
      for (int a = 0; a <= d; ++a) {
        J inner = J::seed(xt[a], 2, a == ax ? 1.0 : 0.0, xt[0]);
        JJ outer = JJ::constant(inner, 2, inner_zero);
        if (a == ay) outer.c[1] = inner_one;
        jin[a] = outer;
      }
      net::forward(spec, params, std::span<const JJ>(jin), std::span<JJ>(jout));
      for (int c = 0; c < m; ++c) table.at(c, lay.slot_mixed(ax, ay)) = jout[c].c[2].c[2];
    }
  }
}

// Same table built from the analytic exact solution (the "oracle network").
void exact_deriv_table(const Problem& prob, std::span<const double> xt,
                       DerivTable<double>& table);

// Residual of the exact solution at an interior point. Validates the
// residual assembly and the jet engine jointly; should vanish to ~1e-8.
void exact_residual(const Problem& prob, std::span<const double> xt, std::span<double> out);

// Composite PINN loss, evaluated with plain doubles (no gradient).
LossParts pinn_loss(const Problem& prob, const net::MlpSpec& spec, const net::ParamSet& theta,
                    const SampleSets& sets);

struct LossGradResult {
  LossParts parts;
  net::ParamSet grad;
};

// Reference gradient path: the whole loss is evaluated on a Tape with the
// parameters as inputs, then reverse-swept. Quadratic in patience, linear in
// trust; the batched engine is checked against this.
LossGradResult pinn_loss_grad(const Problem& prob, const net::MlpSpec& spec,
                              const net::ParamSet& theta, const SampleSets& sets);

}  // namespace capinn::pde
