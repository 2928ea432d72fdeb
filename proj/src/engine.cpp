#include "capinn/pde/engine.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

namespace capinn::pde {

using net::MlpSpec;
using net::ParamSet;

// ------------------------------------------------------------ layouts ----

ChannelLayout ChannelLayout::value_only(int spatial_dim) {
  ChannelLayout l;
  l.channels = 1;
  l.axis_group.assign(spatial_dim, -1);
  return l;
}

ChannelLayout ChannelLayout::for_problem(const DerivSlotLayout& lay, int spatial_dim) {
  ChannelLayout l;
  l.axis_group.assign(spatial_dim, -1);
  auto add_group = [&](PassGroup g) {
    l.offset.push_back(l.channels);
    l.channels += g.degree;
    l.groups.push_back(std::move(g));
    return int(l.groups.size()) - 1;
  };
  if (lay.time_order >= 1)
    l.time_group = add_group(PassGroup{lay.time_order, {{spatial_dim, 1.0}}});
  for (int a = 0; a < spatial_dim; ++a)
    if (lay.space_order[a] > 0)
      l.axis_group[a] = add_group(PassGroup{lay.space_order[a], {{a, 1.0}}});
  for (auto [ax, ay] : lay.mixed) {
    const int gp = add_group(PassGroup{4, {{ax, 1.0}, {ay, 1.0}}});
    const int gm = add_group(PassGroup{4, {{ax, 1.0}, {ay, -1.0}}});
    l.diag_groups.push_back({gp, gm});
  }
  return l;
}

// ------------------------------------------------- compose kernels -------

namespace {

// phi[k] = k-th derivative stack of the activation at the value channel,
// one entry per lane. p5 is only needed by the reverse pass.
struct PhiStack {
  double p0[kLanes], p1[kLanes], p2[kLanes], p3[kLanes], p4[kLanes], p5[kLanes];
};

// Builds the derivative stack from already-known tanh values, so the
// reverse pass never re-evaluates tanh.
void phis_tanh_from_t(const double* __restrict__ t_vals, PhiStack& st, bool for_backward) {
  for (int l = 0; l < kLanes; ++l) {
    const double t = t_vals[l];
    const double s = 1.0 - t * t;
    st.p0[l] = t;
    st.p1[l] = s;
    st.p2[l] = -2.0 * t * s;
    st.p3[l] = (6.0 * t * t - 2.0) * s;
    st.p4[l] = (16.0 * t - 24.0 * t * t * t) * s;
    if (for_backward) st.p5[l] = (16.0 - 120.0 * t * t + 120.0 * t * t * t * t) * s;
  }
}

void phis_tanh(const double* u0, PhiStack& st, bool for_backward) {
  double t[kLanes];
  for (int l = 0; l < kLanes; ++l) t[l] = std::tanh(u0[l]);
  phis_tanh_from_t(t, st, for_backward);
}

void phis_trig(const double* u0, PhiStack& c_st, PhiStack& s_st) {
  for (int l = 0; l < kLanes; ++l) {
    const double cv = std::cos(u0[l]);
    const double sv = std::sin(u0[l]);
    c_st.p0[l] = cv;  c_st.p1[l] = -sv; c_st.p2[l] = -cv;
    c_st.p3[l] = sv;  c_st.p4[l] = cv;  c_st.p5[l] = -sv;
    s_st.p0[l] = sv;  s_st.p1[l] = cv;  s_st.p2[l] = -sv;
    s_st.p3[l] = -cv; s_st.p4[l] = sv;  s_st.p5[l] = cv;
  }
}

// h = phi(u) per group (raw-derivative Faa di Bruno, degree <= 4)
void compose_forward(const ChannelLayout& lay, const PhiStack& p, const double* u, double* h) {
  for (int l = 0; l < kLanes; ++l) h[l] = p.p0[l];
  for (size_t g = 0; g < lay.groups.size(); ++g) {
    const int off = lay.offset[g];
    const int deg = lay.groups[g].degree;
    const double* u1 = u + size_t(off) * kLanes;
    double* h1 = h + size_t(off) * kLanes;
    for (int l = 0; l < kLanes; ++l) h1[l] = p.p1[l] * u1[l];
    if (deg >= 2) {
      const double* u2 = u1 + kLanes;
      double* h2 = h1 + kLanes;
      for (int l = 0; l < kLanes; ++l)
        h2[l] = p.p1[l] * u2[l] + p.p2[l] * u1[l] * u1[l];
    }
    if (deg >= 3) {
      const double* u2 = u1 + kLanes;
      const double* u3 = u1 + 2 * kLanes;
      double* h3 = h1 + 2 * kLanes;
      for (int l = 0; l < kLanes; ++l)
        h3[l] = p.p1[l] * u3[l] + 3.0 * p.p2[l] * u1[l] * u2[l] +
                p.p3[l] * u1[l] * u1[l] * u1[l];
    }
    if (deg >= 4) {
      const double* u2 = u1 + kLanes;
      const double* u3 = u1 + 2 * kLanes;
      const double* u4 = u1 + 3 * kLanes;
      double* h4 = h1 + 3 * kLanes;
      for (int l = 0; l < kLanes; ++l) {
        const double a1 = u1[l], a2 = u2[l], a3 = u3[l], a4 = u4[l];
        h4[l] = p.p1[l] * a4 + p.p2[l] * (4.0 * a1 * a3 + 3.0 * a2 * a2) +
                6.0 * p.p3[l] * a1 * a1 * a2 + p.p4[l] * a1 * a1 * a1 * a1;
      }
    }
  }
}

// u_adj += dh/du^T h_adj; u_adj must be zeroed by the caller beforehand.
void compose_backward(const ChannelLayout& lay, const PhiStack& p, const double* u,
                      const double* h_adj, double* u_adj) {
  for (int l = 0; l < kLanes; ++l) u_adj[l] = p.p1[l] * h_adj[l];
  for (size_t g = 0; g < lay.groups.size(); ++g) {
    const int off = lay.offset[g];
    const int deg = lay.groups[g].degree;
    const double* u1 = u + size_t(off) * kLanes;
    const double* hb1 = h_adj + size_t(off) * kLanes;
    double* ub0 = u_adj;
    double* ub1 = u_adj + size_t(off) * kLanes;
    for (int l = 0; l < kLanes; ++l) {
      ub0[l] += p.p2[l] * u1[l] * hb1[l];
      ub1[l] = p.p1[l] * hb1[l];
    }
    if (deg >= 2) {
      const double* u2 = u1 + kLanes;
      const double* hb2 = hb1 + kLanes;
      double* ub2 = ub1 + kLanes;
      for (int l = 0; l < kLanes; ++l) {
        const double a1 = u1[l], a2 = u2[l], hb = hb2[l];
        ub0[l] += (p.p2[l] * a2 + p.p3[l] * a1 * a1) * hb;
        ub1[l] += 2.0 * p.p2[l] * a1 * hb;
        ub2[l] = p.p1[l] * hb;
      }
    }
    if (deg >= 3) {
      const double* u2 = u1 + kLanes;
      const double* u3 = u1 + 2 * kLanes;
      const double* hb3 = hb1 + 2 * kLanes;
      double* ub2 = ub1 + kLanes;
      double* ub3 = ub1 + 2 * kLanes;
      for (int l = 0; l < kLanes; ++l) {
        const double a1 = u1[l], a2 = u2[l], a3 = u3[l], hb = hb3[l];
        ub0[l] += (p.p2[l] * a3 + 3.0 * p.p3[l] * a1 * a2 + p.p4[l] * a1 * a1 * a1) * hb;
        ub1[l] += (3.0 * p.p2[l] * a2 + 3.0 * p.p3[l] * a1 * a1) * hb;
        ub2[l] += 3.0 * p.p2[l] * a1 * hb;
        ub3[l] = p.p1[l] * hb;
      }
    }
    if (deg >= 4) {
      const double* u2 = u1 + kLanes;
      const double* u3 = u1 + 2 * kLanes;
      const double* u4 = u1 + 3 * kLanes;
      const double* hb4 = hb1 + 3 * kLanes;
      double* ub2 = ub1 + kLanes;
      double* ub3 = ub1 + 2 * kLanes;
      double* ub4 = ub1 + 3 * kLanes;
      for (int l = 0; l < kLanes; ++l) {
        const double a1 = u1[l], a2 = u2[l], a3 = u3[l], a4 = u4[l], hb = hb4[l];
        ub0[l] += (p.p2[l] * a4 + p.p3[l] * (4.0 * a1 * a3 + 3.0 * a2 * a2) +
                   6.0 * p.p4[l] * a1 * a1 * a2 + p.p5[l] * a1 * a1 * a1 * a1) *
                  hb;
        ub1[l] += (4.0 * p.p2[l] * a3 + 12.0 * p.p3[l] * a1 * a2 + 4.0 * p.p4[l] * a1 * a1 * a1) * hb;
        ub2[l] += (6.0 * p.p2[l] * a2 + 6.0 * p.p3[l] * a1 * a1) * hb;
        ub3[l] += 4.0 * p.p2[l] * a1 * hb;
        ub4[l] = p.p1[l] * hb;
      }
    }
  }
}

void affine_forward(const double* __restrict__ w, const double* __restrict__ b,
                    const double* __restrict__ in, double* __restrict__ out, int nin, int nout,
                    int cl) {
  for (int i = 0; i < nout; ++i) {
    double* __restrict__ oi = out + size_t(i) * cl;
    std::memset(oi, 0, size_t(cl) * sizeof(double));
    const double* __restrict__ wi = w + size_t(i) * nin;
    int j = 0;
    for (; j + 4 <= nin; j += 4) {
      const double w0 = wi[j], w1 = wi[j + 1], w2 = wi[j + 2], w3 = wi[j + 3];
      const double* __restrict__ a0 = in + size_t(j) * cl;
      const double* __restrict__ a1 = a0 + cl;
      const double* __restrict__ a2 = a1 + cl;
      const double* __restrict__ a3 = a2 + cl;
      for (int q = 0; q < cl; ++q) oi[q] += w0 * a0[q] + w1 * a1[q] + w2 * a2[q] + w3 * a3[q];
    }
    for (; j < nin; ++j) {
      const double wij = wi[j];
      const double* __restrict__ aj = in + size_t(j) * cl;
      for (int q = 0; q < cl; ++q) oi[q] += wij * aj[q];
    }
    for (int l = 0; l < kLanes; ++l) oi[l] += b[i];
  }
}

void affine_backward(const double* __restrict__ w, const double* __restrict__ in,
                     const double* __restrict__ out_adj, double* __restrict__ in_adj,
                     double* __restrict__ w_grad, double* __restrict__ b_grad, int nin,
                     int nout, int cl) {
  if (in_adj) std::memset(in_adj, 0, size_t(nin) * cl * sizeof(double));
  for (int i = 0; i < nout; ++i) {
    const double* __restrict__ ob = out_adj + size_t(i) * cl;
    for (int l = 0; l < kLanes; ++l) b_grad[i] += ob[l];
    const double* __restrict__ wi = w + size_t(i) * nin;
    double* __restrict__ wg = w_grad + size_t(i) * nin;
    for (int j = 0; j < nin; ++j) {
      const double* __restrict__ aj = in + size_t(j) * cl;
      double acc = 0.0;
      for (int q = 0; q < cl; ++q) acc += ob[q] * aj[q];
      wg[j] += acc;
      if (in_adj) {
        double* __restrict__ ib = in_adj + size_t(j) * cl;
        const double wij = wi[j];
        for (int q = 0; q < cl; ++q) ib[q] += wij * ob[q];
      }
    }
  }
}

}  // namespace

// --------------------------------------------------------- BatchJetNet ----

BatchJetNet::BatchJetNet(const MlpSpec& spec, ChannelLayout layout)
    : spec_(spec), lay_(std::move(layout)), c_(lay_.channels) {
  dims_ = spec_.layer_dims();
  const auto descs = net::layout_for(spec_);
  for (size_t i = 0; i < descs.size(); i += 2) {
    w_off_.push_back(descs[i].offset);
    b_off_.push_back(descs[i + 1].offset);
  }
  const size_t cl = size_t(c_) * kLanes;
  in_axes_.assign(size_t(spec_.input_dim) * cl, 0.0);
  feats_.assign(size_t(spec_.embedded_input_dim()) * cl, 0.0);
  const int layers = spec_.hidden_depth + 1;
  z_.resize(layers);
  a_.resize(layers);
  z_adj_.resize(layers);
  a_adj_.resize(layers);
  for (int l = 0; l < layers; ++l) {
    z_[l].assign(size_t(dims_[l + 1]) * cl, 0.0);
    a_[l].assign(size_t(dims_[l + 1]) * cl, 0.0);
    z_adj_[l].assign(size_t(dims_[l + 1]) * cl, 0.0);
    a_adj_[l].assign(size_t(dims_[l + 1]) * cl, 0.0);
  }
  out_.assign(size_t(spec_.output_dim) * cl, 0.0);
  out_adj_.assign(size_t(spec_.output_dim) * cl, 0.0);
}

void BatchJetNet::forward(const ParamSet& theta, const double* coords) {
  const size_t cl = size_t(c_) * kLanes;
  // input axis jets: value channel plus the directional seeds
  std::memset(in_axes_.data(), 0, in_axes_.size() * sizeof(double));
  for (int ax = 0; ax < spec_.input_dim; ++ax) {
    double* base = in_axes_.data() + size_t(ax) * cl;
    for (int l = 0; l < kLanes; ++l) base[l] = coords[size_t(ax) * kLanes + l];
    for (size_t g = 0; g < lay_.groups.size(); ++g)
      for (auto [dir_ax, seed] : lay_.groups[g].dir)
        if (dir_ax == ax) {
          double* d1 = base + size_t(lay_.offset[g]) * kLanes;
          for (int l = 0; l < kLanes; ++l) d1[l] = seed;
        }
  }

  // embedding
  double* feat = feats_.data();
  std::vector<double> arg(cl);
  PhiStack pc, ps;
  for (int ax = 0; ax < spec_.input_dim; ++ax) {
    const double* base = in_axes_.data() + size_t(ax) * cl;
    if (!spec_.axis_embedded(ax)) {
      std::memcpy(feat, base, cl * sizeof(double));
      feat += cl;
      continue;
    }
    const double omega = 2.0 * std::numbers::pi / spec_.axis_period(ax);
    for (int k = 1; k <= spec_.embedding->modes; ++k) {
      const double kw = k * omega;
      for (size_t q = 0; q < cl; ++q) arg[q] = kw * base[q];
      phis_trig(arg.data(), pc, ps);
      compose_forward(lay_, pc, arg.data(), feat);
      feat += cl;
      compose_forward(lay_, ps, arg.data(), feat);
      feat += cl;
    }
  }

  // layers
  const double* in = feats_.data();
  PhiStack pt;
  for (int layer = 0; layer <= spec_.hidden_depth; ++layer) {
    const double* w = theta.flat().data() + w_off_[layer];
    const double* b = theta.flat().data() + b_off_[layer];
    affine_forward(w, b, in, z_[layer].data(), dims_[layer], dims_[layer + 1], int(cl));
    if (layer < spec_.hidden_depth) {
      for (int i = 0; i < dims_[layer + 1]; ++i) {
        const double* zi = z_[layer].data() + size_t(i) * cl;
        double* ai = a_[layer].data() + size_t(i) * cl;
        phis_tanh(zi, pt, false);
        compose_forward(lay_, pt, zi, ai);
      }
      in = a_[layer].data();
    } else {
      std::memcpy(out_.data(), z_[layer].data(), out_.size() * sizeof(double));
    }
  }
}

void BatchJetNet::zero_out_adj() {
  std::fill(out_adj_.begin(), out_adj_.end(), 0.0);
}

void BatchJetNet::backward(const ParamSet& theta, ParamSet& grad) {
  const size_t cl = size_t(c_) * kLanes;
  const int last = spec_.hidden_depth;
  std::memcpy(z_adj_[last].data(), out_adj_.data(), out_adj_.size() * sizeof(double));

  PhiStack pt;
  for (int layer = last; layer >= 0; --layer) {
    const double* w = theta.flat().data() + w_off_[layer];
    double* wg = grad.flat().data() + w_off_[layer];
    double* bg = grad.flat().data() + b_off_[layer];
    const double* in = (layer == 0) ? feats_.data() : a_[layer - 1].data();
    double* in_adj = (layer == 0) ? nullptr : a_adj_[layer - 1].data();
    affine_backward(w, in, z_adj_[layer].data(), in_adj, wg, bg, dims_[layer],
                    dims_[layer + 1], int(cl));
    if (layer > 0) {
      // adjoint through tanh: a_adj -> z_adj of the previous layer; the
      // stored activation value channel already holds tanh(z)
      for (int i = 0; i < dims_[layer]; ++i) {
        const double* zi = z_[layer - 1].data() + size_t(i) * cl;
        const double* ai = a_[layer - 1].data() + size_t(i) * cl;
        const double* ha = a_adj_[layer - 1].data() + size_t(i) * cl;
        double* za = z_adj_[layer - 1].data() + size_t(i) * cl;
        phis_tanh_from_t(ai, pt, true);
        compose_backward(lay_, pt, zi, ha, za);
      }
    }
  }
}

// ----------------------------------------------------------- LossEngine ----

LossEngine::LossEngine(const Problem& prob, const MlpSpec& spec, SampleSets sets,
                       std::optional<LossWeights> weights)
    : prob_(&prob),
      spec_(spec),
      sets_(std::move(sets)),
      w_(weights ? *weights
                 : LossWeights{prob.info().lambda_f, prob.info().lambda_b,
                               prob.info().lambda_i}),
      lay_(ChannelLayout::for_problem(prob.deriv_layout(), prob.info().spatial_dim)),
      interior_net_(spec, lay_),
      value_net_(spec, ChannelLayout::value_only(prob.info().spatial_dim)) {
  const auto& info = prob_->info();
  if (w_.lf != 0.0 && sets_.interior.n == 0)
    throw ConfigError("interior loss active but no collocation points");
  if (w_.lb != 0.0 && !info.hard_periodic_bc && sets_.boundary.n == 0)
    throw ConfigError("boundary loss active but no boundary points");
  if (w_.li != 0.0 && sets_.initial.n == 0)
    throw ConfigError("initial loss active but no initial points");

  // Trace the per-point residual once over slot inputs; mixed slots are
  // polarization expressions of the diagonal degree-4 channels.
  const auto& slay = prob_->deriv_layout();
  const int d = info.spatial_dim;
  ad::Tape tape;
  std::vector<ad::Var> coords;
  for (int a = 0; a <= d; ++a) {
    const double mid = (a < d) ? 0.5 * (info.lo[a] + info.hi[a]) : 0.5 * (info.t0 + info.t1);
    coords.push_back(tape.input(mid));
  }
  DerivTable<ad::Var> table;
  table.init(slay);
  prog_slots_.clear();
  const int spc = slay.slots_per_comp();
  auto is_mixed_slot = [&](int slot) {
    return slot >= spc - int(slay.mixed.size());
  };
  for (int c = 0; c < slay.comps; ++c)
    for (int s = 0; s < spc; ++s) {
      if (is_mixed_slot(s)) continue;
      // map the slot to its engine channel
      int channel = 0;
      if (s == slay.slot_value()) {
        channel = 0;
      } else if (slay.time_order >= 1 && s == slay.slot_dt()) {
        channel = lay_.offset[lay_.time_group];
      } else {
        for (int a = 0; a < d && channel == 0; ++a)
          for (int o = 1; o <= slay.space_order[a] && channel == 0; ++o)
            if (s == slay.slot_dx(a, o)) channel = lay_.offset[lay_.axis_group[a]] + o - 1;
      }
      table.at(c, s) = tape.input(0.01 * (s + 1));
      prog_slots_.push_back({c, channel});
    }
  for (size_t p = 0; p < slay.mixed.size(); ++p) {
    auto [ax, ay] = slay.mixed[p];
    auto [gp, gm] = lay_.diag_groups[p];
    for (int c = 0; c < slay.comps; ++c) {
      ad::Var dp = tape.input(0.0);
      prog_slots_.push_back({c, lay_.offset[gp] + 3});
      ad::Var dm = tape.input(0.0);
      prog_slots_.push_back({c, lay_.offset[gm] + 3});
      const ad::Var x4 = table.at(c, slay.slot_dx(ax, 4));
      const ad::Var y4 = table.at(c, slay.slot_dx(ay, 4));
      table.at(c, slay.slot_mixed(ax, ay)) = (dp + dm - 2.0 * x4 - 2.0 * y4) / 12.0;
    }
  }
  std::vector<ad::Var> r(info.outputs, tape.constant(0.0));
  prob_->residual(std::span<const ad::Var>(coords), table, std::span<ad::Var>(r));
  std::vector<int32_t> outs;
  for (auto v : r) outs.push_back(v.id);
  residual_prog_ = ad::TapeProgram(tape, outs);
  prog_in_.resize(size_t(d + 1) + prog_slots_.size());
  seeds_.resize(info.outputs);
}

void LossEngine::set_initial_targets(std::vector<double> targets) {
  if (targets.size() != sets_.initial_targets.size())
    throw DimensionError("set_initial_targets: size mismatch");
  sets_.initial_targets = std::move(targets);
}

void LossEngine::set_interior(PointSet pts) {
  if (pts.dim != sets_.interior.dim) throw DimensionError("set_interior: dim mismatch");
  sets_.interior = std::move(pts);
}

double LossEngine::data_term(const ParamSet& theta, ParamSet* grad, const PointSet& pts,
                             const std::vector<double>& targets, double weight) {
  const int m = prob_->info().outputs;
  const int d = prob_->info().spatial_dim;
  const int n = pts.n;
  double acc = 0.0;
  std::vector<double> coords(size_t(d + 1) * kLanes);
  for (int start = 0; start < n; start += kLanes) {
    const int nvalid = std::min(kLanes, n - start);
    for (int a = 0; a <= d; ++a)
      for (int l = 0; l < kLanes; ++l)
        coords[size_t(a) * kLanes + l] = pts.row(start + std::min(l, nvalid - 1))[a];
    value_net_.forward(theta, coords.data());
    if (grad) value_net_.zero_out_adj();
    for (int l = 0; l < nvalid; ++l) {
      for (int c = 0; c < m; ++c) {
        const double diff = value_net_.out(c, 0, l) - targets[size_t(start + l) * m + c];
        acc += diff * diff;
        if (grad) value_net_.out_adj(c, 0, l) = 2.0 * (weight / n) * diff;
      }
    }
    if (grad) value_net_.backward(theta, *grad);
  }
  return acc / n;
}

LossParts LossEngine::run(const ParamSet& theta, ParamSet* grad) {
  if (grad) grad->fill(0.0);
  LossParts parts;
  const auto& info = prob_->info();
  const int d = info.spatial_dim;
  const int m = info.outputs;

  if (w_.lf != 0.0 && sets_.interior.n > 0) {
    const int n = sets_.interior.n;
    double acc = 0.0;
    std::vector<double> coords(size_t(d + 1) * kLanes);
    for (int start = 0; start < n; start += kLanes) {
      const int nvalid = std::min(kLanes, n - start);
      for (int a = 0; a <= d; ++a)
        for (int l = 0; l < kLanes; ++l)
          coords[size_t(a) * kLanes + l] = sets_.interior.row(start + std::min(l, nvalid - 1))[a];
      interior_net_.forward(theta, coords.data());
      if (grad) interior_net_.zero_out_adj();
      for (int l = 0; l < nvalid; ++l) {
        for (int a = 0; a <= d; ++a) prog_in_[a] = coords[size_t(a) * kLanes + l];
        for (size_t k = 0; k < prog_slots_.size(); ++k)
          prog_in_[size_t(d + 1) + k] =
              interior_net_.out(prog_slots_[k].comp, prog_slots_[k].channel, l);
        residual_prog_.forward(prog_in_);
        for (int c = 0; c < m; ++c) {
          const double r = residual_prog_.output(c);
          acc += r * r;
          seeds_[c] = grad ? 2.0 * (w_.lf / n) * r : 0.0;
        }
        if (grad) {
          residual_prog_.backward(seeds_);
          for (size_t k = 0; k < prog_slots_.size(); ++k)
            interior_net_.out_adj(prog_slots_[k].comp, prog_slots_[k].channel, l) +=
                residual_prog_.input_adjoint(int(d + 1 + k));
        }
      }
      if (grad) interior_net_.backward(theta, *grad);
    }
    parts.lf = acc / n;
  }

  if (w_.lb != 0.0 && sets_.boundary.n > 0)
    parts.lb = data_term(theta, grad, sets_.boundary, sets_.boundary_targets, w_.lb);
  if (w_.li != 0.0 && sets_.initial.n > 0)
    parts.li = data_term(theta, grad, sets_.initial, sets_.initial_targets, w_.li);

  parts.total = w_.lf * parts.lf + w_.lb * parts.lb + w_.li * parts.li;
  return parts;
}

void LossEngine::predict(const ParamSet& theta, const PointSet& pts, std::vector<double>& out) {
  const int m = prob_->info().outputs;
  const int d = prob_->info().spatial_dim;
  out.assign(size_t(pts.n) * m, 0.0);
  std::vector<double> coords(size_t(d + 1) * kLanes);
  for (int start = 0; start < pts.n; start += kLanes) {
    const int nvalid = std::min(kLanes, pts.n - start);
    for (int a = 0; a <= d; ++a)
      for (int l = 0; l < kLanes; ++l)
        coords[size_t(a) * kLanes + l] = pts.row(start + std::min(l, nvalid - 1))[a];
    value_net_.forward(theta, coords.data());
    for (int l = 0; l < nvalid; ++l)
      for (int c = 0; c < m; ++c) out[size_t(start + l) * m + c] = value_net_.out(c, 0, l);
  }
}

}  // namespace capinn::pde
