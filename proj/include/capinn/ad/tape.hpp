#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <unordered_map>
#include <vector>

#include "capinn/errors.hpp"

namespace capinn::ad {

enum class Op : uint8_t { Const, Input, Add, Sub, Mul, Div, Neg, Tanh, Sin, Cos, Exp, Powi };

const char* op_name(Op op);

struct Node {
  Op op;
  int32_t a = -1;
  int32_t b = -1;  // second parent, or the integer exponent for Powi
};

class Tape;

// Handle to a tape node. Copyable value type; arithmetic on Vars appends
// nodes to the owning tape and evaluates eagerly.
struct Var {
  Tape* tape = nullptr;
  int32_t id = -1;
};

// Append-only scalar computation graph. Nodes are stored in topological
// order by construction; values are computed eagerly so a NonFiniteError
// points at the first offending operation.
class Tape {
 public:
  Var constant(double v) {
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    auto it = const_cache_.find(bits);
    if (it != const_cache_.end()) return Var{this, it->second};
    int32_t id = push(Op::Const, -1, -1, v);
    const_cache_.emplace(bits, id);
    return Var{this, id};
  }

  Var input(double v) {
    int32_t id = push(Op::Input, -1, -1, v);
    input_ids_.push_back(id);
    return Var{this, id};
  }

  Var emit(Op op, Var a, Var b) {
    check_owned(a);
    check_owned(b);
    return Var{this, push(op, a.id, b.id, eval2(op, val_[a.id], val_[b.id]))};
  }

  Var emit(Op op, Var a) {
    check_owned(a);
    return Var{this, push(op, a.id, -1, eval1(op, val_[a.id]))};
  }

  Var powi(Var a, int n) {
    check_owned(a);
    if (n < 0) return emit(Op::Div, constant(1.0), powi(a, -n));
    return Var{this, push(Op::Powi, a.id, n, std::pow(val_[a.id], double(n)))};
  }

  double value(Var v) const { return val_[v.id]; }
  double value(int32_t id) const { return val_[id]; }
  size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return val_; }
  const std::vector<int32_t>& input_ids() const { return input_ids_; }

  // Reverse sweep from `seed`. Returns the adjoint of every node; visits each
  // node exactly once. Throws NonFiniteError if any adjoint is non-finite.
  std::vector<double> backward(Var seed) const;

 private:
  friend class TapeProgram;

  void check_owned(Var v) const {
    if (v.tape != this) throw StateError("Var does not belong to this tape");
  }

  static double eval1(Op op, double a) {
    switch (op) {
      case Op::Neg: return -a;
      case Op::Tanh: return std::tanh(a);
      case Op::Sin: return std::sin(a);
      case Op::Cos: return std::cos(a);
      case Op::Exp: return std::exp(a);
      default: throw StateError("eval1: bad op");
    }
  }

  static double eval2(Op op, double a, double b) {
    switch (op) {
      case Op::Add: return a + b;
      case Op::Sub: return a - b;
      case Op::Mul: return a * b;
      case Op::Div: return a / b;
      default: throw StateError("eval2: bad op");
    }
  }

  int32_t push(Op op, int32_t a, int32_t b, double v) {
    if (!std::isfinite(v)) throw NonFiniteError(op_name(op));
    nodes_.push_back(Node{op, a, b});
    val_.push_back(v);
    return int32_t(nodes_.size() - 1);
  }

  std::vector<Node> nodes_;
  std::vector<double> val_;
  std::vector<int32_t> input_ids_;
  std::unordered_map<uint64_t, int32_t> const_cache_;
};

inline Var operator+(Var a, Var b) { return a.tape->emit(Op::Add, a, b); }
inline Var operator-(Var a, Var b) { return a.tape->emit(Op::Sub, a, b); }
inline Var operator*(Var a, Var b) { return a.tape->emit(Op::Mul, a, b); }
inline Var operator/(Var a, Var b) { return a.tape->emit(Op::Div, a, b); }
inline Var operator-(Var a) { return a.tape->emit(Op::Neg, a); }
inline Var operator+(Var a, double b) { return a + a.tape->constant(b); }
inline Var operator+(double a, Var b) { return b.tape->constant(a) + b; }
inline Var operator-(Var a, double b) { return a - a.tape->constant(b); }
inline Var operator-(double a, Var b) { return b.tape->constant(a) - b; }
inline Var operator*(Var a, double b) { return a * a.tape->constant(b); }
inline Var operator*(double a, Var b) { return b.tape->constant(a) * b; }
inline Var operator/(Var a, double b) { return a / a.tape->constant(b); }
inline Var operator/(double a, Var b) { return b.tape->constant(a) / b; }
inline Var& operator+=(Var& a, Var b) { return a = a + b; }
inline Var& operator-=(Var& a, Var b) { return a = a - b; }
inline Var& operator*=(Var& a, Var b) { return a = a * b; }

inline Var tanh(Var a) { return a.tape->emit(Op::Tanh, a); }
inline Var sin(Var a) { return a.tape->emit(Op::Sin, a); }
inline Var cos(Var a) { return a.tape->emit(Op::Cos, a); }
inline Var exp(Var a) { return a.tape->emit(Op::Exp, a); }
inline Var powi(Var a, int n) { return a.tape->powi(a, n); }

// A traced computation frozen for repeated evaluation with fresh input
// values. Replay shares the tape's op semantics but reuses flat buffers, so
// per-point evaluation does no allocation.
class TapeProgram {
 public:
  TapeProgram() = default;
  TapeProgram(const Tape& tape, std::vector<int32_t> outputs);

  int num_inputs() const { return int(inputs_.size()); }
  int num_outputs() const { return int(outputs_.size()); }

  // Evaluates with the i-th Input node bound to inputs[i].
  void forward(std::span<const double> inputs);
  double output(int i) const { return val_[outputs_[i]]; }

  // Reverse sweep with the given output adjoints; input adjoints are then
  // available through input_adjoint().
  void backward(std::span<const double> output_adjoints);
  double input_adjoint(int i) const { return adj_[inputs_[i]]; }

 private:
  std::vector<Node> nodes_;
  std::vector<double> base_val_;  // holds constants; other entries overwritten
  std::vector<int32_t> inputs_, outputs_;
  std::vector<double> val_, adj_;
};

}  // namespace capinn::ad
