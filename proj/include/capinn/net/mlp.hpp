#pragma once

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capinn/ad/jet.hpp"
#include "capinn/math/rng.hpp"
#include "capinn/net/params.hpp"

namespace capinn::net {

// Fourier feature embedding: each embedded axis x is replaced by
// [cos(w x), sin(w x), ..., cos(m w x), sin(m w x)] with w = 2*pi/period,
// which makes the network output exactly period-periodic in that axis.
struct FourierEmbedding {
  std::vector<int> axes;             // input axis indices (never the time axis)
  int modes = 10;
  std::vector<double> periods;       // one per embedded axis
};

struct MlpSpec {
  int input_dim = 1;
  int hidden_width = 32;
  int hidden_depth = 3;
  int output_dim = 1;
  std::optional<FourierEmbedding> embedding;

  bool axis_embedded(int axis) const {
    if (!embedding) return false;
    for (int a : embedding->axes)
      if (a == axis) return true;
    return false;
  }

  double axis_period(int axis) const {
    for (size_t i = 0; i < embedding->axes.size(); ++i)
      if (embedding->axes[i] == axis) return embedding->periods[i];
    throw ConfigError("axis_period: axis not embedded");
  }

  // Width of the first affine layer's input after embedding.
  int embedded_input_dim() const {
    int n = 0;
    for (int a = 0; a < input_dim; ++a) n += axis_embedded(a) ? 2 * embedding->modes : 1;
    return n;
  }

  void validate() const {
    if (input_dim < 1 || hidden_width < 1 || hidden_depth < 1 || output_dim < 1)
      throw ConfigError("MlpSpec: dimensions must be >= 1");
    if (embedding) {
      if (embedding->modes < 1) throw ConfigError("MlpSpec: embedding modes must be >= 1");
      if (embedding->periods.size() != embedding->axes.size())
        throw ConfigError("MlpSpec: one period per embedded axis required");
      for (int a : embedding->axes)
        if (a < 0 || a >= input_dim) throw ConfigError("MlpSpec: embedded axis out of range");
    }
  }

  // Layer input/output widths: embedded input, hidden..., output.
  std::vector<int> layer_dims() const {
    std::vector<int> dims;
    dims.push_back(embedded_input_dim());
    for (int l = 0; l < hidden_depth; ++l) dims.push_back(hidden_width);
    dims.push_back(output_dim);
    return dims;
  }
};

// The parameter layout is a pure function of the spec: w0,b0,w1,b1,...
std::vector<TensorDesc> layout_for(const MlpSpec& spec);

inline ParamSet make_params(const MlpSpec& spec) { return ParamSet(layout_for(spec)); }

// Glorot-uniform weights, zero biases, drawn in layout order so the result
// is a pure function of the rng state.
ParamSet init_glorot(const MlpSpec& spec, math::Rng rng);

// Parameter views generic over the scalar kind. P=double reads the ParamSet
// directly; P=Var registers every parameter as a tape input.
template <class P>
struct Params;

template <>
struct Params<double> {
  const ParamSet* set;
  explicit Params(const ParamSet& s) : set(&s) {}
  double at(size_t flat_index) const { return set->flat()[flat_index]; }
};

template <>
struct Params<ad::Var> {
  std::vector<ad::Var> vars;
  explicit Params(std::vector<ad::Var> v) : vars(std::move(v)) {}
  Params(ad::Tape& tape, const ParamSet& s) {
    vars.reserve(s.count());
    for (double v : s.flat()) vars.push_back(tape.input(v));
  }
  ad::Var at(size_t flat_index) const { return vars[flat_index]; }
};

namespace detail {

// acc += p * x for scalar parameter p and activation scalar x, where x may
// be a jet of arbitrary nesting over p's kind.
template <class P, class X>
void axpy_scalar(X& acc, const P& p, const X& x) {
  if constexpr (ad::is_jet_v<X>) {
    for (int i = 0; i <= x.deg; ++i) axpy_scalar(acc.c[i], p, x.c[i]);
  } else {
    acc = acc + p * x;
  }
}

template <class P, class X>
void add_scalar(X& acc, const P& p) {
  if constexpr (ad::is_jet_v<X>) {
    add_scalar(acc.c[0], p);
  } else {
    acc = acc + p;
  }
}

}  // namespace detail

// Applies the Fourier embedding (when configured) in the activation scalar
// kind, so derivative information in jets flows through the features.
template <class X>
void embed_input(const MlpSpec& spec, std::span<const X> input, std::vector<X>& features) {
  features.clear();
  for (int a = 0; a < spec.input_dim; ++a) {
    if (!spec.axis_embedded(a)) {
      features.push_back(input[a]);
      continue;
    }
    const double omega = 2.0 * std::numbers::pi / spec.axis_period(a);
    for (int k = 1; k <= spec.embedding->modes; ++k) {
      using ad::cos;
      using ad::sin;
      using std::cos;
      using std::sin;
      X arg = (double(k) * omega) * input[a];
      features.push_back(cos(arg));
      features.push_back(sin(arg));
    }
  }
}

// MLP forward pass: embedding, hidden affine+tanh layers, final affine.
// Scalar-kind generic: X may be double, Var, or (nested) jets of either.
template <class P, class X>
void forward(const MlpSpec& spec, const Params<P>& params, std::span<const X> input,
             std::span<X> output) {
  if (int(input.size()) != spec.input_dim) throw DimensionError("forward: input size mismatch");
  if (int(output.size()) != spec.output_dim) throw DimensionError("forward: output size mismatch");

  std::vector<X> act;
  embed_input(spec, input, act);

  const X zero_proto = ad::lift_like(0.0, act[0]);

  const std::vector<int> dims = spec.layer_dims();
  size_t off = 0;
  std::vector<X> next;
  for (int layer = 0; layer <= spec.hidden_depth; ++layer) {
    const int nin = dims[layer], nout = dims[layer + 1];
    next.assign(nout, zero_proto);
    const size_t w_off = off;
    const size_t b_off = off + size_t(nout) * nin;
    for (int i = 0; i < nout; ++i) {
      X acc = zero_proto;
      for (int j = 0; j < nin; ++j)
        detail::axpy_scalar(acc, params.at(w_off + size_t(i) * nin + j), act[j]);
      detail::add_scalar(acc, params.at(b_off + i));
      if (layer < spec.hidden_depth) {
        using ad::tanh;
        using std::tanh;
        next[i] = tanh(acc);
      } else {
        next[i] = acc;
      }
    }
    act.swap(next);
    off = b_off + nout;
  }
  for (int i = 0; i < spec.output_dim; ++i) output[i] = act[i];
}

}  // namespace capinn::net
