#include "capinn/pde/loss.hpp"

#include <cmath>

namespace capinn::pde {

using ad::Jet;
using ad::Tape;
using ad::Var;
using net::MlpSpec;
using net::ParamSet;

namespace {

// Mirrors network_deriv_table's pass structure, evaluating the exact
// solution instead of the network.
void build_exact_table(const Problem& prob, std::span<const double> xt,
                       DerivTable<double>& table) {
  const DerivSlotLayout& lay = prob.deriv_layout();
  const int d = prob.info().spatial_dim;
  const int m = prob.info().outputs;
  table.init(lay);

  std::vector<Jet<double>> in(d + 1), out(m);
  {
    const int deg = lay.time_order;
    for (int a = 0; a <= d; ++a) in[a] = Jet<double>::seed(xt[a], deg, a == d ? 1.0 : 0.0, 0.0);
    prob.exact_jet1(in, out);
    for (int c = 0; c < m; ++c) {
      table.at(c, lay.slot_value()) = out[c].c[0];
      if (lay.time_order >= 1) table.at(c, lay.slot_dt()) = out[c].c[1];
    }
  }
  for (int axis = 0; axis < d; ++axis) {
    const int deg = lay.space_order[axis];
    if (deg == 0) continue;
    for (int a = 0; a <= d; ++a)
      in[a] = Jet<double>::seed(xt[a], deg, a == axis ? 1.0 : 0.0, 0.0);
    prob.exact_jet1(in, out);
    for (int c = 0; c < m; ++c)
      for (int o = 1; o <= deg; ++o) table.at(c, lay.slot_dx(axis, o)) = out[c].c[o];
  }
  if (!lay.mixed.empty()) {
    using J = Jet<double>;
    using JJ = Jet<J>;
    const J inner_zero = J::constant(0.0, 2, 0.0);
    const J inner_one = J::constant(1.0, 2, 0.0);
    std::vector<JJ> jin(d + 1), jout(m);
    for (auto [ax, ay] : lay.mixed) {
      for (int a = 0; a <= d; ++a) {
        J inner = J::seed(xt[a], 2, a == ax ? 1.0 : 0.0, 0.0);
        JJ outer = JJ::constant(inner, 2, inner_zero);
        if (a == ay) outer.c[1] = inner_one;
        jin[a] = outer;
      }
      prob.exact_jet2(jin, jout);
      for (int c = 0; c < m; ++c) table.at(c, lay.slot_mixed(ax, ay)) = jout[c].c[2].c[2];
    }
  }
}

}  // namespace

void exact_deriv_table(const Problem& prob, std::span<const double> xt,
                       DerivTable<double>& table) {
  build_exact_table(prob, xt, table);
}

void exact_residual(const Problem& prob, std::span<const double> xt, std::span<double> out) {
  DerivTable<double> table;
  build_exact_table(prob, xt, table);
  prob.residual(xt, table, out);
}

LossParts pinn_loss(const Problem& prob, const MlpSpec& spec, const ParamSet& theta,
                    const SampleSets& sets) {
  const auto& info = prob.info();
  const int m = info.outputs;
  net::Params<double> params(theta);
  LossParts parts;

  if (sets.interior.n > 0) {
    DerivTable<double> table;
    std::vector<double> r(m);
    double acc = 0.0;
    for (int i = 0; i < sets.interior.n; ++i) {
      auto xt = sets.interior.row(i);
      network_deriv_table<double>(prob, spec, params, xt, table);
      prob.residual(xt, table, r);
      for (double v : r) acc += v * v;
    }
    parts.lf = acc / sets.interior.n;
  }

  auto value_mse = [&](const PointSet& pts, const std::vector<double>& targets) {
    std::vector<double> y(m);
    double acc = 0.0;
    for (int i = 0; i < pts.n; ++i) {
      forward(spec, params, pts.row(i), std::span<double>(y));
      for (int c = 0; c < m; ++c) {
        const double dfc = y[c] - targets[size_t(i) * m + c];
        acc += dfc * dfc;
      }
    }
    return acc / pts.n;
  };
  if (sets.boundary.n > 0) parts.lb = value_mse(sets.boundary, sets.boundary_targets);
  if (sets.initial.n > 0) parts.li = value_mse(sets.initial, sets.initial_targets);

  parts.total = info.lambda_f * parts.lf + info.lambda_b * parts.lb + info.lambda_i * parts.li;
  return parts;
}

LossGradResult pinn_loss_grad(const Problem& prob, const MlpSpec& spec, const ParamSet& theta,
                              const SampleSets& sets) {
  const auto& info = prob.info();
  const int m = info.outputs;
  Tape tape;
  net::Params<Var> params(tape, theta);

  Var lf = tape.constant(0.0), lb = tape.constant(0.0), li = tape.constant(0.0);

  if (sets.interior.n > 0) {
    DerivTable<Var> table;
    std::vector<Var> r(m);
    std::vector<Var> xt(info.spatial_dim + 1);
    Var acc = tape.constant(0.0);
    for (int i = 0; i < sets.interior.n; ++i) {
      auto row = sets.interior.row(i);
      for (size_t a = 0; a < xt.size(); ++a) xt[a] = tape.constant(row[a]);
      network_deriv_table<Var>(prob, spec, params, xt, table);
      prob.residual(xt, table, r);
      for (Var v : r) acc += v * v;
    }
    lf = acc / double(sets.interior.n);
  }

  auto value_mse = [&](const PointSet& pts, const std::vector<double>& targets) {
    std::vector<Var> y(m, tape.constant(0.0));
    std::vector<Var> xt(info.spatial_dim + 1);
    Var acc = tape.constant(0.0);
    for (int i = 0; i < pts.n; ++i) {
      auto row = pts.row(i);
      for (size_t a = 0; a < xt.size(); ++a) xt[a] = tape.constant(row[a]);
      forward(spec, params, std::span<const Var>(xt), std::span<Var>(y));
      for (int c = 0; c < m; ++c) {
        Var dfc = y[c] - targets[size_t(i) * m + c];
        acc += dfc * dfc;
      }
    }
    return acc / double(pts.n);
  };
  if (sets.boundary.n > 0) lb = value_mse(sets.boundary, sets.boundary_targets);
  if (sets.initial.n > 0) li = value_mse(sets.initial, sets.initial_targets);

  Var total = info.lambda_f * lf + info.lambda_b * lb + info.lambda_i * li;
  auto adj = tape.backward(total);

  LossGradResult res{LossParts{tape.value(total), tape.value(lf), tape.value(lb), tape.value(li)},
                     ParamSet::zeros_like(theta)};
  for (size_t i = 0; i < params.vars.size(); ++i)
    res.grad.flat()[i] = adj[params.vars[i].id];
  return res;
}

}  // namespace capinn::pde
