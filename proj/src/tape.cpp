#include "capinn/ad/tape.hpp"

#include <algorithm>

namespace capinn::ad {

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Input: return "input";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Neg: return "neg";
    case Op::Tanh: return "tanh";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Powi: return "powi";
  }
  return "?";
}

namespace {

// Adjoint accumulation for one node given its value and parents' values.
inline void accumulate(const Node& n, double out_val, double out_adj,
                       const std::vector<double>& val, std::vector<double>& adj) {
  switch (n.op) {
    case Op::Const:
    case Op::Input:
      break;
    case Op::Add:
      adj[n.a] += out_adj;
      adj[n.b] += out_adj;
      break;
    case Op::Sub:
      adj[n.a] += out_adj;
      adj[n.b] -= out_adj;
      break;
    case Op::Mul:
      adj[n.a] += out_adj * val[n.b];
      adj[n.b] += out_adj * val[n.a];
      break;
    case Op::Div: {
      const double inv_b = 1.0 / val[n.b];
      adj[n.a] += out_adj * inv_b;
      adj[n.b] -= out_adj * out_val * inv_b;
      break;
    }
    case Op::Neg:
      adj[n.a] -= out_adj;
      break;
    case Op::Tanh:
      adj[n.a] += out_adj * (1.0 - out_val * out_val);
      break;
    case Op::Sin:
      adj[n.a] += out_adj * std::cos(val[n.a]);
      break;
    case Op::Cos:
      adj[n.a] -= out_adj * std::sin(val[n.a]);
      break;
    case Op::Exp:
      adj[n.a] += out_adj * out_val;
      break;
    case Op::Powi:
      adj[n.a] += out_adj * double(n.b) * std::pow(val[n.a], double(n.b - 1));
      break;
  }
}

}  // namespace

std::vector<double> Tape::backward(Var seed) const {
  check_owned(seed);
  std::vector<double> adj(nodes_.size(), 0.0);
  adj[seed.id] = 1.0;
  for (int32_t i = int32_t(nodes_.size()) - 1; i >= 0; --i) {
    const double a = adj[i];
    if (a == 0.0) continue;
    if (!std::isfinite(a)) throw NonFiniteError(op_name(nodes_[i].op));
    accumulate(nodes_[i], val_[i], a, val_, adj);
  }
  return adj;
}

TapeProgram::TapeProgram(const Tape& tape, std::vector<int32_t> outputs)
    : nodes_(tape.nodes_),
      base_val_(tape.val_),
      inputs_(tape.input_ids_),
      outputs_(std::move(outputs)) {
  val_.resize(nodes_.size());
  adj_.resize(nodes_.size());
}

void TapeProgram::forward(std::span<const double> inputs) {
  if (inputs.size() != inputs_.size())
    throw DimensionError("TapeProgram::forward: input count mismatch");
  val_ = base_val_;
  for (size_t i = 0; i < inputs_.size(); ++i) val_[inputs_[i]] = inputs[i];
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::Const:
      case Op::Input:
        break;
      case Op::Add: val_[i] = val_[n.a] + val_[n.b]; break;
      case Op::Sub: val_[i] = val_[n.a] - val_[n.b]; break;
      case Op::Mul: val_[i] = val_[n.a] * val_[n.b]; break;
      case Op::Div: val_[i] = val_[n.a] / val_[n.b]; break;
      case Op::Neg: val_[i] = -val_[n.a]; break;
      case Op::Tanh: val_[i] = std::tanh(val_[n.a]); break;
      case Op::Sin: val_[i] = std::sin(val_[n.a]); break;
      case Op::Cos: val_[i] = std::cos(val_[n.a]); break;
      case Op::Exp: val_[i] = std::exp(val_[n.a]); break;
      case Op::Powi: val_[i] = std::pow(val_[n.a], double(n.b)); break;
    }
  }
}

void TapeProgram::backward(std::span<const double> output_adjoints) {
  if (output_adjoints.size() != outputs_.size())
    throw DimensionError("TapeProgram::backward: seed count mismatch");
  std::fill(adj_.begin(), adj_.end(), 0.0);
  for (size_t i = 0; i < outputs_.size(); ++i) adj_[outputs_[i]] += output_adjoints[i];
  for (int32_t i = int32_t(nodes_.size()) - 1; i >= 0; --i) {
    const double a = adj_[i];
    if (a == 0.0) continue;
    accumulate(nodes_[i], val_[i], a, val_, adj_);
  }
}

}  // namespace capinn::ad
