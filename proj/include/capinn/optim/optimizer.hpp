#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "capinn/math/matrix.hpp"
#include "capinn/net/params.hpp"

#include "json.hpp"

namespace capinn::optim {

using net::ParamSet;

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

struct MuonConfig {
  double momentum = 0.95;
  double weight_decay = 0.0;
  int ns_iters = 5;
  AdamWConfig fallback;  // applied to vector tensors (biases)
};

struct SoapConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double beta_p = 0.95;
  double eps = 1e-8;
  double weight_decay = 0.0;
  int refresh = 10;      // eigenbasis refresh period f
  AdamWConfig fallback;  // applied to vector tensors (biases)
};

enum class CaScope { Global, PerTensor };
enum class CaGate { Tanh, Fixed };

struct CaConfig {
  double alpha_base = 0.1;
  double beta_a = 0.9;
  double s_guard = 1e-12;  // displacement-norm floor
  CaScope scope = CaScope::Global;
  CaGate gate = CaGate::Tanh;
};

struct GateResult {
  double kappa = 0.0;
  double alpha = 0.0;
  bool guarded = false;  // ||s|| fell below s_guard
};

// Secant curvature indicator and gate: kappa = <s,y>/max(||s||^2, guard^2),
// alpha = alpha_base * (1 + tanh(-kappa)). Alpha is strictly decreasing in
// kappa and lies in (0, 2*alpha_base).
GateResult curvature_gate(std::span<const double> s, std::span<const double> y,
                          const CaConfig& cfg);

// Per-step observability for the trainer's metrics and lemma monitors.
struct StepStats {
  double step_norm = 0.0;     // ||theta' - theta||
  double kappa = 0.0;         // flat-vector secant curvature (from step 2)
  double alpha = 0.0;         // gate value actually applied (flat scope)
  double alpha_min = 0.0;     // range over tensors under per-tensor scope
  double alpha_max = 0.0;
  double boosted_norm = 0.0;  // ||g~||
  double precond_min = std::numeric_limits<double>::infinity();
  double precond_max = 0.0;   // range of 1/(sqrt(v_hat)+eps) over Adam coords
  bool has_precond = false;
  bool ca_guarded = false;    // gate used the guarded denominator
  bool eig_fallback = false;  // SOAP kept stale eigenbases this step
};

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual StepStats step(ParamSet& theta, const ParamSet& grad, double lr) = 0;
  virtual std::string kind() const = 0;

  // State serialization into the shared container format.
  virtual void save_state(nlohmann::json& meta, std::vector<double>& payload) const = 0;
  virtual void load_state(const nlohmann::json& meta, std::span<const double> payload) = 0;
  virtual void reset() = 0;  // fresh state (time-marching window boundary)
};

class AdamW : public Optimizer {
 public:
  AdamW(const ParamSet& shape, AdamWConfig cfg);
  StepStats step(ParamSet& theta, const ParamSet& grad, double lr) override;
  std::string kind() const override { return "adamw"; }
  void save_state(nlohmann::json&, std::vector<double>&) const override;
  void load_state(const nlohmann::json&, std::span<const double>) override;
  void reset() override;

  const AdamWConfig& config() const { return cfg_; }

 private:
  AdamWConfig cfg_;
  ParamSet m_, v_;
  long step_ = 0;
};

class Muon : public Optimizer {
 public:
  Muon(const ParamSet& shape, MuonConfig cfg);
  StepStats step(ParamSet& theta, const ParamSet& grad, double lr) override;
  std::string kind() const override { return "muon"; }
  void save_state(nlohmann::json&, std::vector<double>&) const override;
  void load_state(const nlohmann::json&, std::span<const double>) override;
  void reset() override;

 private:
  MuonConfig cfg_;
  ParamSet momentum_;      // M, matrix tensors only (others unused)
  ParamSet fb_m_, fb_v_;   // AdamW fallback moments for vector tensors
  long step_ = 0;
};

class Soap : public Optimizer {
 public:
  Soap(const ParamSet& shape, SoapConfig cfg);
  StepStats step(ParamSet& theta, const ParamSet& grad, double lr) override;
  std::string kind() const override { return "soap"; }
  void save_state(nlohmann::json&, std::vector<double>&) const override;
  void load_state(const nlohmann::json&, std::span<const double>) override;
  void reset() override;

 private:
  struct MatState {
    math::Matrix l, r;      // EMA Kronecker factors
    math::Matrix ul, ur;    // eigenbases
    math::Matrix m, v;      // rotated-space Adam moments
  };
  void init_states(const ParamSet& shape);

  SoapConfig cfg_;
  std::vector<MatState> mats_;  // indexed by tensor id; empty for vectors
  ParamSet fb_m_, fb_v_;
  long step_ = 0;
};

// Curvature-aware wrapper: transforms the raw gradient into the boosted
// gradient g~ = g + alpha * a before the base update, where a is an EMA of
// consecutive gradient differences and alpha is the secant gate. With
// alpha_base = 0 the wrapper is the identity on gradients.
class CaWrapper : public Optimizer {
 public:
  CaWrapper(const ParamSet& shape, CaConfig cfg, std::unique_ptr<Optimizer> base);
  StepStats step(ParamSet& theta, const ParamSet& grad, double lr) override;
  std::string kind() const override { return "ca_" + base_->kind(); }
  void save_state(nlohmann::json&, std::vector<double>&) const override;
  void load_state(const nlohmann::json&, std::span<const double>) override;
  void reset() override;

  long ca_step() const { return step_; }
  double last_kappa() const { return last_kappa_; }
  double last_alpha() const { return last_alpha_; }

 private:
  CaConfig cfg_;
  std::unique_ptr<Optimizer> base_;
  ParamSet prev_grad_, prev_theta_, ema_, boosted_;
  long step_ = 0;
  double last_kappa_ = 0.0, last_alpha_ = 0.0;
};

// Shared helper: one AdamW coordinate sweep over a tensor span. Returns the
// squared norm of the applied update and widens the preconditioner range.
void adamw_span_update(std::span<double> theta, std::span<const double> grad,
                       std::span<double> m, std::span<double> v, long step_count,
                       const AdamWConfig& cfg, double lr, double& upd_sq,
                       double& precond_min, double& precond_max);

}  // namespace capinn::optim
