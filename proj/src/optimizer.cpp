#include "capinn/optim/optimizer.hpp"

#include <cmath>
#include <cstring>

#include "capinn/math/eigh.hpp"
#include "capinn/math/newton_schulz.hpp"

namespace capinn::optim {

using math::Matrix;
using nlohmann::json;

namespace {

Matrix to_matrix(std::span<const double> data, int rows, int cols) {
  return Matrix(rows, cols, std::vector<double>(data.begin(), data.end()));
}

void from_matrix(const Matrix& m, std::span<double> out) {
  std::memcpy(out.data(), m.data().data(), m.size() * sizeof(double));
}

void append_payload(std::vector<double>& payload, std::span<const double> data) {
  payload.insert(payload.end(), data.begin(), data.end());
}

std::span<const double> take_payload(std::span<const double>& payload, size_t n) {
  if (payload.size() < n) throw StateError("optimizer state payload too short");
  auto head = payload.subspan(0, n);
  payload = payload.subspan(n);
  return head;
}

GateResult gate_from_dots(double s_sq, double sy, const CaConfig& cfg) {
  GateResult r;
  r.guarded = s_sq < cfg.s_guard * cfg.s_guard;
  const double denom = std::max(s_sq, cfg.s_guard * cfg.s_guard);
  r.kappa = sy / denom;
  r.alpha = (cfg.gate == CaGate::Fixed) ? cfg.alpha_base
                                        : cfg.alpha_base * (1.0 + std::tanh(-r.kappa));
  return r;
}

}  // namespace

GateResult curvature_gate(std::span<const double> s, std::span<const double> y,
                          const CaConfig& cfg) {
  if (s.size() != y.size()) throw DimensionError("curvature_gate: shape mismatch");
  double s_sq = 0.0, sy = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    s_sq += s[i] * s[i];
    sy += s[i] * y[i];
  }
  return gate_from_dots(s_sq, sy, cfg);
}

void adamw_span_update(std::span<double> theta, std::span<const double> grad,
                       std::span<double> m, std::span<double> v, long step_count,
                       const AdamWConfig& cfg, double lr, double& upd_sq,
                       double& precond_min, double& precond_max) {
  const double bc1 = 1.0 - std::pow(cfg.beta1, double(step_count));
  const double bc2 = 1.0 - std::pow(cfg.beta2, double(step_count));
  for (size_t i = 0; i < theta.size(); ++i) {
    const double g = grad[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    const double precond = 1.0 / (std::sqrt(v_hat) + cfg.eps);
    precond_min = std::min(precond_min, precond);
    precond_max = std::max(precond_max, precond);
    const double upd = m_hat * precond + cfg.weight_decay * theta[i];
    theta[i] -= lr * upd;
    upd_sq += upd * upd;
  }
}

// ---------------------------------------------------------------- AdamW ----

AdamW::AdamW(const ParamSet& shape, AdamWConfig cfg)
    : cfg_(cfg), m_(ParamSet::zeros_like(shape)), v_(ParamSet::zeros_like(shape)) {}

StepStats AdamW::step(ParamSet& theta, const ParamSet& grad, double lr) {
  theta.check_same_layout(grad);
  m_.check_same_layout(grad);
  if (!grad.all_finite()) throw NonFiniteError("adamw gradient");
  ++step_;
  StepStats stats;
  double upd_sq = 0.0;
  adamw_span_update(theta.flat(), grad.flat(), m_.flat(), v_.flat(), step_, cfg_, lr,
                    upd_sq, stats.precond_min, stats.precond_max);
  stats.step_norm = lr * std::sqrt(upd_sq);
  stats.has_precond = true;
  return stats;
}

void AdamW::save_state(json& meta, std::vector<double>& payload) const {
  meta["kind"] = "adamw";
  meta["step"] = step_;
  append_payload(payload, m_.flat());
  append_payload(payload, v_.flat());
}

void AdamW::load_state(const json& meta, std::span<const double> payload) {
  step_ = meta.at("step").get<long>();
  auto rest = payload;
  auto mm = take_payload(rest, m_.count());
  auto vv = take_payload(rest, v_.count());
  std::copy(mm.begin(), mm.end(), m_.flat().begin());
  std::copy(vv.begin(), vv.end(), v_.flat().begin());
}

void AdamW::reset() {
  m_.fill(0.0);
  v_.fill(0.0);
  step_ = 0;
}

// ----------------------------------------------------------------- Muon ----

Muon::Muon(const ParamSet& shape, MuonConfig cfg)
    : cfg_(cfg),
      momentum_(ParamSet::zeros_like(shape)),
      fb_m_(ParamSet::zeros_like(shape)),
      fb_v_(ParamSet::zeros_like(shape)) {}

StepStats Muon::step(ParamSet& theta, const ParamSet& grad, double lr) {
  theta.check_same_layout(grad);
  momentum_.check_same_layout(grad);
  if (!grad.all_finite()) throw NonFiniteError("muon gradient");
  ++step_;
  StepStats stats;
  double upd_sq = 0.0;
  for (int t = 0; t < theta.num_tensors(); ++t) {
    const auto& d = theta.desc(t);
    auto th = theta.tensor(t);
    auto g = grad.tensor(t);
    if (!d.is_matrix) {
      adamw_span_update(th, g, fb_m_.tensor(t), fb_v_.tensor(t), step_, cfg_.fallback, lr,
                        upd_sq, stats.precond_min, stats.precond_max);
      stats.has_precond = true;
      continue;
    }
    auto mom = momentum_.tensor(t);
    for (size_t i = 0; i < mom.size(); ++i) mom[i] = cfg_.momentum * mom[i] + g[i];
    Matrix o(d.rows, d.cols);
    for (size_t i = 0; i < mom.size(); ++i) o.data()[i] = cfg_.momentum * mom[i] + g[i];
    Matrix x = math::newton_schulz(o, cfg_.ns_iters);
    const double scale = std::max(1.0, std::sqrt(double(d.cols) / double(d.rows)));
    for (size_t i = 0; i < th.size(); ++i) {
      const double upd = scale * x.data()[i] + cfg_.weight_decay * th[i];
      th[i] -= lr * upd;
      upd_sq += upd * upd;
    }
  }
  stats.step_norm = lr * std::sqrt(upd_sq);
  return stats;
}

void Muon::save_state(json& meta, std::vector<double>& payload) const {
  meta["kind"] = "muon";
  meta["step"] = step_;
  append_payload(payload, momentum_.flat());
  append_payload(payload, fb_m_.flat());
  append_payload(payload, fb_v_.flat());
}

void Muon::load_state(const json& meta, std::span<const double> payload) {
  step_ = meta.at("step").get<long>();
  auto rest = payload;
  for (ParamSet* p : {&momentum_, &fb_m_, &fb_v_}) {
    auto part = take_payload(rest, p->count());
    std::copy(part.begin(), part.end(), p->flat().begin());
  }
}

void Muon::reset() {
  momentum_.fill(0.0);
  fb_m_.fill(0.0);
  fb_v_.fill(0.0);
  step_ = 0;
}

// ----------------------------------------------------------------- Soap ----

Soap::Soap(const ParamSet& shape, SoapConfig cfg)
    : cfg_(cfg),
      fb_m_(ParamSet::zeros_like(shape)),
      fb_v_(ParamSet::zeros_like(shape)) {
  init_states(shape);
}

void Soap::init_states(const ParamSet& shape) {
  mats_.clear();
  mats_.resize(shape.num_tensors());
  for (int t = 0; t < shape.num_tensors(); ++t) {
    const auto& d = shape.desc(t);
    if (!d.is_matrix) continue;
    MatState st;
    st.l = Matrix::identity(d.rows);
    st.l *= cfg_.eps;
    st.r = Matrix::identity(d.cols);
    st.r *= cfg_.eps;
    st.ul = Matrix::identity(d.rows);
    st.ur = Matrix::identity(d.cols);
    st.m = Matrix(d.rows, d.cols);
    st.v = Matrix(d.rows, d.cols);
    mats_[t] = st;
  }
}

StepStats Soap::step(ParamSet& theta, const ParamSet& grad, double lr) {
  theta.check_same_layout(grad);
  fb_m_.check_same_layout(grad);
  if (!grad.all_finite()) throw NonFiniteError("soap gradient");
  ++step_;
  StepStats stats;
  double upd_sq = 0.0;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, double(step_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, double(step_));
  for (int t = 0; t < theta.num_tensors(); ++t) {
    const auto& d = theta.desc(t);
    auto th = theta.tensor(t);
    auto g = grad.tensor(t);
    if (!d.is_matrix) {
      adamw_span_update(th, g, fb_m_.tensor(t), fb_v_.tensor(t), step_, cfg_.fallback, lr,
                        upd_sq, stats.precond_min, stats.precond_max);
      stats.has_precond = true;
      continue;
    }
    MatState& st = mats_[t];
    Matrix gm = to_matrix(g, d.rows, d.cols);
    Matrix ggt = math::matmul_nt(gm, gm);
    Matrix gtg = math::matmul_tn(gm, gm);
    st.l *= cfg_.beta_p;
    ggt *= 1.0 - cfg_.beta_p;
    st.l += ggt;
    st.r *= cfg_.beta_p;
    gtg *= 1.0 - cfg_.beta_p;
    st.r += gtg;

    if (step_ % cfg_.refresh == 0) {
      try {
        st.ul = math::jacobi_eigh(st.l).eigenvectors;
        st.ur = math::jacobi_eigh(st.r).eigenvectors;
      } catch (const ConvergenceError&) {
        stats.eig_fallback = true;  // keep the previous bases
      }
    }

    Matrix g_rot = math::matmul(math::matmul_tn(st.ul, gm), st.ur);
    Matrix p(d.rows, d.cols);
    for (size_t i = 0; i < g_rot.size(); ++i) {
      const double gr = g_rot.data()[i];
      double& m = st.m.data()[i];
      double& v = st.v.data()[i];
      m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * gr;
      v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * gr * gr;
      const double m_hat = m / bc1;
      const double v_hat = v / bc2;
      const double precond = 1.0 / (std::sqrt(v_hat) + cfg_.eps);
      p.data()[i] = m_hat * precond;
    }
    Matrix delta = math::matmul_nt(math::matmul(st.ul, p), st.ur);
    for (size_t i = 0; i < th.size(); ++i) {
      const double upd = delta.data()[i] + cfg_.weight_decay * th[i];
      th[i] -= lr * upd;
      upd_sq += upd * upd;
    }
  }
  stats.step_norm = lr * std::sqrt(upd_sq);
  return stats;
}

void Soap::save_state(json& meta, std::vector<double>& payload) const {
  meta["kind"] = "soap";
  meta["step"] = step_;
  for (const auto& st : mats_) {
    if (st.l.size() == 0) continue;
    for (const Matrix* m : {&st.l, &st.r, &st.ul, &st.ur, &st.m, &st.v})
      append_payload(payload, m->data());
  }
  append_payload(payload, fb_m_.flat());
  append_payload(payload, fb_v_.flat());
}

void Soap::load_state(const json& meta, std::span<const double> payload) {
  step_ = meta.at("step").get<long>();
  auto rest = payload;
  for (auto& st : mats_) {
    if (st.l.size() == 0) continue;
    for (Matrix* m : {&st.l, &st.r, &st.ul, &st.ur, &st.m, &st.v}) {
      auto part = take_payload(rest, m->size());
      std::copy(part.begin(), part.end(), m->data().begin());
    }
  }
  for (ParamSet* p : {&fb_m_, &fb_v_}) {
    auto part = take_payload(rest, p->count());
    std::copy(part.begin(), part.end(), p->flat().begin());
  }
}

void Soap::reset() {
  ParamSet shape = ParamSet::zeros_like(fb_m_);
  init_states(shape);
  fb_m_.fill(0.0);
  fb_v_.fill(0.0);
  step_ = 0;
}

// ------------------------------------------------------------ CaWrapper ----

CaWrapper::CaWrapper(const ParamSet& shape, CaConfig cfg, std::unique_ptr<Optimizer> base)
    : cfg_(cfg),
      base_(std::move(base)),
      prev_grad_(ParamSet::zeros_like(shape)),
      prev_theta_(ParamSet::zeros_like(shape)),
      ema_(ParamSet::zeros_like(shape)),
      boosted_(ParamSet::zeros_like(shape)) {}

StepStats CaWrapper::step(ParamSet& theta, const ParamSet& grad, double lr) {
  theta.check_same_layout(grad);
  prev_grad_.check_same_layout(grad);
  ++step_;

  auto g = grad.flat();
  auto gp = prev_grad_.flat();
  auto tp = prev_theta_.flat();
  auto th = theta.flat();
  auto a = ema_.flat();
  auto gb = boosted_.flat();

  StepStats pre;
  if (step_ == 1) {
    // kappa is undefined at the first step; alpha = 0 and g~ = g.
    last_kappa_ = 0.0;
    last_alpha_ = 0.0;
    pre.alpha_min = pre.alpha_max = 0.0;
    std::copy(g.begin(), g.end(), gb.begin());
  } else {
    // EMA of raw gradient differences.
    const double ba = cfg_.beta_a;
    for (size_t i = 0; i < a.size(); ++i) a[i] = ba * a[i] + (1.0 - ba) * (g[i] - gp[i]);

    // Flat-vector gate: always computed, applied under global scope.
    double s_sq = 0.0, sy = 0.0;
    for (size_t i = 0; i < th.size(); ++i) {
      const double s = th[i] - tp[i];
      s_sq += s * s;
      sy += s * (g[i] - gp[i]);
    }
    const GateResult flat = gate_from_dots(s_sq, sy, cfg_);
    last_kappa_ = flat.kappa;
    last_alpha_ = flat.alpha;
    pre.ca_guarded = flat.guarded;

    if (cfg_.alpha_base == 0.0) {
      // Identity on gradients, bit-exact.
      std::copy(g.begin(), g.end(), gb.begin());
      pre.alpha_min = pre.alpha_max = 0.0;
      last_alpha_ = 0.0;
    } else if (cfg_.scope == CaScope::Global) {
      const double alpha = flat.alpha;
      for (size_t i = 0; i < g.size(); ++i) gb[i] = g[i] + alpha * a[i];
      pre.alpha_min = pre.alpha_max = alpha;
    } else {
      pre.alpha_min = std::numeric_limits<double>::infinity();
      pre.alpha_max = 0.0;
      for (int t = 0; t < theta.num_tensors(); ++t) {
        const auto& d = theta.desc(t);
        double ts_sq = 0.0, tsy = 0.0;
        for (size_t i = d.offset; i < d.offset + d.size(); ++i) {
          const double s = th[i] - tp[i];
          ts_sq += s * s;
          tsy += s * (g[i] - gp[i]);
        }
        const GateResult gate = gate_from_dots(ts_sq, tsy, cfg_);
        pre.ca_guarded = pre.ca_guarded || gate.guarded;
        pre.alpha_min = std::min(pre.alpha_min, gate.alpha);
        pre.alpha_max = std::max(pre.alpha_max, gate.alpha);
        for (size_t i = d.offset; i < d.offset + d.size(); ++i)
          gb[i] = g[i] + gate.alpha * a[i];
      }
    }
  }

  std::copy(g.begin(), g.end(), gp.begin());
  std::copy(th.begin(), th.end(), tp.begin());

  StepStats stats = base_->step(theta, boosted_, lr);
  stats.kappa = last_kappa_;
  stats.alpha = last_alpha_;
  stats.alpha_min = pre.alpha_min;
  stats.alpha_max = pre.alpha_max;
  stats.ca_guarded = pre.ca_guarded;
  stats.boosted_norm = boosted_.norm();
  return stats;
}

void CaWrapper::save_state(json& meta, std::vector<double>& payload) const {
  meta["kind"] = kind();
  meta["step"] = step_;
  meta["last_kappa"] = last_kappa_;
  meta["last_alpha"] = last_alpha_;
  append_payload(payload, prev_grad_.flat());
  append_payload(payload, prev_theta_.flat());
  append_payload(payload, ema_.flat());
  json base_meta;
  std::vector<double> base_payload;
  base_->save_state(base_meta, base_payload);
  meta["base"] = base_meta;
  append_payload(payload, base_payload);
}

void CaWrapper::load_state(const json& meta, std::span<const double> payload) {
  step_ = meta.at("step").get<long>();
  last_kappa_ = meta.at("last_kappa").get<double>();
  last_alpha_ = meta.at("last_alpha").get<double>();
  auto rest = payload;
  for (ParamSet* p : {&prev_grad_, &prev_theta_, &ema_}) {
    auto part = take_payload(rest, p->count());
    std::copy(part.begin(), part.end(), p->flat().begin());
  }
  base_->load_state(meta.at("base"), rest);
}

void CaWrapper::reset() {
  prev_grad_.fill(0.0);
  prev_theta_.fill(0.0);
  ema_.fill(0.0);
  step_ = 0;
  last_kappa_ = 0.0;
  last_alpha_ = 0.0;
  base_->reset();
}

}  // namespace capinn::optim
