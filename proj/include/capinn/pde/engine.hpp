#pragma once

#include <optional>
#include <vector>

#include "capinn/ad/tape.hpp"
#include "capinn/net/mlp.hpp"
#include "capinn/pde/loss.hpp"
#include "capinn/pde/problem.hpp"
#include "capinn/pde/sampling.hpp"

namespace capinn::pde {

// Points are processed in fixed-size lane blocks; the reduction order is a
// pure function of the point order, so results do not depend on how work is
// scheduled.
inline constexpr int kLanes = 8;

// One directional jet pass: derivative channels along a seed direction.
struct PassGroup {
  int degree = 1;
  std::vector<std::pair<int, double>> dir;  // (input axis, seed)
};

// Channel layout shared by all passes of one forward: channel 0 is the
// value; each group contributes `degree` derivative channels. Mixed
// d2x d2y derivatives are recovered from two diagonal degree-4 passes by
// polarization, so every group stays univariate.
struct ChannelLayout {
  std::vector<PassGroup> groups;
  std::vector<int> offset;  // first derivative channel per group
  int channels = 1;

  int time_group = -1;
  std::vector<int> axis_group;             // per spatial axis, -1 when unused
  std::vector<std::pair<int, int>> diag_groups;  // per mixed pair: (+,-) group ids

  static ChannelLayout value_only(int spatial_dim);
  static ChannelLayout for_problem(const DerivSlotLayout& lay, int spatial_dim);
};

// Batched MLP evaluation in jet-channel arithmetic with a hand-rolled
// reverse pass for parameter gradients. Activations are stored per layer as
// [neuron][channel][lane] blocks.
class BatchJetNet {
 public:
  BatchJetNet(const net::MlpSpec& spec, ChannelLayout layout);

  const ChannelLayout& layout() const { return lay_; }
  int channels() const { return c_; }

  // coords layout: [axis * kLanes + lane], axes = spec.input_dim (time last)
  void forward(const net::ParamSet& theta, const double* coords);
  double out(int comp, int channel, int lane) const {
    return out_[(size_t(comp) * c_ + channel) * kLanes + lane];
  }
  void zero_out_adj();
  double& out_adj(int comp, int channel, int lane) {
    return out_adj_[(size_t(comp) * c_ + channel) * kLanes + lane];
  }
  // Accumulates the adjoint of the parameters into grad (layout of theta).
  void backward(const net::ParamSet& theta, net::ParamSet& grad);

 private:
  net::MlpSpec spec_;
  ChannelLayout lay_;
  int c_ = 1;
  std::vector<int> dims_;
  std::vector<size_t> w_off_, b_off_;

  std::vector<double> in_axes_;              // [axis][C][L]
  std::vector<double> feats_;                // [feature][C][L]
  std::vector<std::vector<double>> z_, a_;   // per layer pre/post activations
  std::vector<std::vector<double>> z_adj_, a_adj_;
  std::vector<double> out_, out_adj_;
};

struct LossWeights {
  double lf = 1.0, lb = 1.0, li = 1.0;
};

// Training-loop loss evaluator: batched jet passes for the derivatives, a
// replayed per-point residual program for the PDE operator, and value
// passes for boundary/initial data. Numerically pinned to pinn_loss_grad by
// the test suite.
class LossEngine {
 public:
  LossEngine(const Problem& prob, const net::MlpSpec& spec, SampleSets sets,
             std::optional<LossWeights> weights = std::nullopt);

  const SampleSets& sets() const { return sets_; }
  const LossWeights& weights() const { return w_; }

  // Time-marching handoff: replace the initial-condition targets.
  void set_initial_targets(std::vector<double> targets);
  void set_interior(PointSet pts);

  LossParts loss_and_grad(const net::ParamSet& theta, net::ParamSet& grad) {
    return run(theta, &grad);
  }
  LossParts loss(const net::ParamSet& theta) { return run(theta, nullptr); }

  // Plain value predictions, row-major [point][component].
  void predict(const net::ParamSet& theta, const PointSet& pts, std::vector<double>& out);

 private:
  LossParts run(const net::ParamSet& theta, net::ParamSet* grad);
  double data_term(const net::ParamSet& theta, net::ParamSet* grad, const PointSet& pts,
                   const std::vector<double>& targets, double weight);

  const Problem* prob_;
  net::MlpSpec spec_;
  SampleSets sets_;
  LossWeights w_;
  ChannelLayout lay_;
  BatchJetNet interior_net_, value_net_;
  ad::TapeProgram residual_prog_;
  struct SlotRef {
    int comp;
    int channel;
  };
  std::vector<SlotRef> prog_slots_;  // program inputs after the coords
  std::vector<double> prog_in_, seeds_;
};

}  // namespace capinn::pde
