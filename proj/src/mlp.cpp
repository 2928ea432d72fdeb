#include "capinn/net/mlp.hpp"

#include <cmath>

namespace capinn::net {

std::vector<TensorDesc> layout_for(const MlpSpec& spec) {
  spec.validate();
  std::vector<TensorDesc> descs;
  const std::vector<int> dims = spec.layer_dims();
  size_t off = 0;
  for (int layer = 0; layer + 1 < int(dims.size()); ++layer) {
    TensorDesc w;
    w.name = "w" + std::to_string(layer);
    w.rows = dims[layer + 1];
    w.cols = dims[layer];
    w.is_matrix = true;
    w.offset = off;
    off += w.size();
    descs.push_back(w);

    TensorDesc b;
    b.name = "b" + std::to_string(layer);
    b.rows = dims[layer + 1];
    b.cols = 1;
    b.is_matrix = false;
    b.offset = off;
    off += b.size();
    descs.push_back(b);
  }
  return descs;
}

ParamSet init_glorot(const MlpSpec& spec, math::Rng rng) {
  ParamSet p(layout_for(spec));
  for (int t = 0; t < p.num_tensors(); ++t) {
    const TensorDesc& d = p.desc(t);
    auto view = p.tensor(t);
    if (!d.is_matrix) continue;  // biases stay zero
    const double limit = std::sqrt(6.0 / (d.rows + d.cols));
    for (double& v : view) v = rng.uniform(-limit, limit);
  }
  return p;
}

}  // namespace capinn::net
