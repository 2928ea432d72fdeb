#include <cmath>
#include <cstdio>
#include <filesystem>

#include "capinn/ad/functions.hpp"
#include "capinn/net/mlp.hpp"
#include "capinn/net/serialize.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace capinn;
using ad::Jet;
using ad::Tape;
using ad::Var;
using namespace capinn::net;

namespace {

MlpSpec small_spec(int in = 2, int width = 8, int depth = 2, int out = 1) {
  MlpSpec s;
  s.input_dim = in;
  s.hidden_width = width;
  s.hidden_depth = depth;
  s.output_dim = out;
  return s;
}

}  // namespace

TEST_CASE("init_glorot is deterministic given the rng seed") {
  MlpSpec spec = small_spec(3, 16, 3, 2);
  ParamSet a = init_glorot(spec, math::Rng(7));
  ParamSet b = init_glorot(spec, math::Rng(7));
  REQUIRE(a.count() == b.count());
  for (size_t i = 0; i < a.count(); ++i) CHECK(a.flat()[i] == b.flat()[i]);
}

TEST_CASE("init_glorot respects the uniform bound for a 4->4 layer") {
  MlpSpec spec = small_spec(4, 4, 1, 4);
  ParamSet p = init_glorot(spec, math::Rng(3));
  const double limit = std::sqrt(6.0 / 8.0);
  for (int t = 0; t < p.num_tensors(); ++t) {
    if (!p.desc(t).is_matrix) continue;
    for (double w : p.tensor(t)) CHECK(std::abs(w) <= limit);
  }
}

TEST_CASE("init_glorot empirical variance close to 2/(fan_in+fan_out)") {
  // One wide layer gives 10^4 samples of the same distribution.
  MlpSpec spec = small_spec(100, 100, 1, 1);
  ParamSet p = init_glorot(spec, math::Rng(11));
  auto w = p.tensor(0);
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= double(w.size());
  double var = 0.0;
  for (double v : w) var += (v - mean) * (v - mean);
  var /= double(w.size());
  const double expect = 2.0 / 200.0;
  CHECK(std::abs(var - expect) / expect < 0.05);
}

TEST_CASE("zero-weight network outputs the final bias") {
  MlpSpec spec = small_spec(2, 4, 2, 2);
  ParamSet p = make_params(spec);
  auto fb = p.tensor(p.num_tensors() - 1);
  fb[0] = 1.25;
  fb[1] = -0.5;
  Params<double> view(p);
  std::vector<double> x{0.3, -0.7}, y(2);
  forward(spec, view, std::span<const double>(x), std::span<double>(y));
  CHECK(y[0] == 1.25);
  CHECK(y[1] == -0.5);
}

TEST_CASE("hand-set one-hidden-layer network matches hand evaluation") {
  MlpSpec spec = small_spec(1, 2, 1, 1);
  ParamSet p = make_params(spec);
  // w0 (2x1), b0 (2), w1 (1x2), b1 (1)
  p.tensor(0)[0] = 0.5;
  p.tensor(0)[1] = -1.5;
  p.tensor(1)[0] = 0.1;
  p.tensor(1)[1] = 0.2;
  p.tensor(2)[0] = 2.0;
  p.tensor(2)[1] = -1.0;
  p.tensor(3)[0] = 0.25;
  Params<double> view(p);
  std::vector<double> x{0.8}, y(1);
  forward(spec, view, std::span<const double>(x), std::span<double>(y));
  const double h0 = std::tanh(0.5 * 0.8 + 0.1);
  const double h1 = std::tanh(-1.5 * 0.8 + 0.2);
  CHECK(y[0] == doctest::Approx(2.0 * h0 - 1.0 * h1 + 0.25).epsilon(1e-15));
}

TEST_CASE("fourier embedding makes the output exactly periodic") {
  MlpSpec spec = small_spec(2, 16, 2, 1);  // axes: x (embedded), t
  FourierEmbedding emb;
  emb.axes = {0};
  emb.modes = 10;
  emb.periods = {100.0};
  spec.embedding = emb;
  ParamSet p = init_glorot(spec, math::Rng(21));
  Params<double> view(p);
  math::Rng rng(5);
  for (int trial = 0; trial < 16; ++trial) {
    std::vector<double> x{rng.uniform(-50.0, 50.0), rng.uniform(0.0, 1.0)};
    std::vector<double> xs{x[0] + 100.0, x[1]};
    std::vector<double> y0(1), y1(1);
    forward(spec, view, std::span<const double>(x), std::span<double>(y0));
    forward(spec, view, std::span<const double>(xs), std::span<double>(y1));
    CHECK(std::abs(y0[0] - y1[0]) <= 1e-12);
  }
}

TEST_CASE("degree-0 jet forward equals plain double forward bitwise") {
  MlpSpec spec = small_spec(3, 12, 3, 2);
  ParamSet p = init_glorot(spec, math::Rng(9));
  Params<double> view(p);
  std::vector<double> x{0.2, -0.4, 0.9}, y(2);
  forward(spec, view, std::span<const double>(x), std::span<double>(y));

  std::vector<Jet<double>> xj(3), yj(2);
  for (int i = 0; i < 3; ++i) xj[i] = Jet<double>::seed(x[i], 0, 0.0, 0.0);
  forward(spec, view, std::span<const Jet<double>>(xj), std::span<Jet<double>>(yj));
  CHECK(yj[0].c[0] == y[0]);
  CHECK(yj[1].c[0] == y[1]);
}

TEST_CASE("jet forward derivatives match finite differences in the input") {
  MlpSpec spec = small_spec(2, 10, 2, 1);
  ParamSet p = init_glorot(spec, math::Rng(31));
  Params<double> view(p);
  const double x0 = 0.3, x1 = -0.6;
  auto f = [&](double a) {
    std::vector<double> x{a, x1}, y(1);
    forward(spec, view, std::span<const double>(x), std::span<double>(y));
    return y[0];
  };
  std::vector<Jet<double>> xj(2), yj(1);
  xj[0] = Jet<double>::seed(x0, 2, 1.0, 0.0);
  xj[1] = Jet<double>::seed(x1, 2, 0.0, 0.0);
  forward(spec, view, std::span<const Jet<double>>(xj), std::span<Jet<double>>(yj));
  CHECK(oracles::rel_error(yj[0].c[1], oracles::central_diff(f, x0, 1, 0.05)) <= 1e-8);
  CHECK(oracles::rel_error(yj[0].c[2], oracles::central_diff(f, x0, 2, 0.05)) <= 1e-8);
}

TEST_CASE("gradient of a scalar readout matches finite differences end to end") {
  MlpSpec spec = small_spec(2, 8, 2, 1);
  ParamSet p = init_glorot(spec, math::Rng(13));
  std::vector<double> x{0.4, 0.1};

  auto taped = [&](Tape& tape, std::span<const Var> vars) {
    Params<Var> pv{std::vector<Var>(vars.begin(), vars.end())};
    std::vector<Var> xv{tape.constant(x[0]), tape.constant(x[1])};
    std::vector<Var> y{tape.constant(0.0)};
    forward(spec, pv, std::span<const Var>(xv), std::span<Var>(y));
    return y[0] * y[0];
  };
  auto r = ad::grad(taped, p.flat());

  auto plain = [&](std::span<const double> theta) {
    ParamSet q = ParamSet::zeros_like(p);
    std::copy(theta.begin(), theta.end(), q.flat().begin());
    Params<double> view(q);
    std::vector<double> y(1);
    forward(spec, view, std::span<const double>(x), std::span<double>(y));
    return y[0] * y[0];
  };
  auto fd = oracles::central_gradient(plain, p.flat());
  CHECK(oracles::max_rel_error(r.gradient, fd) <= 1e-6);
}

TEST_CASE("param container round-trips through disk") {
  namespace fs = std::filesystem;
  MlpSpec spec = small_spec(2, 6, 2, 2);
  FourierEmbedding emb;
  emb.axes = {0};
  emb.modes = 4;
  emb.periods = {2.0};
  spec.embedding = emb;
  ParamSet p = init_glorot(spec, math::Rng(77));
  const std::string path = (fs::temp_directory_path() / "capinn_params_test.bin").string();
  save_params(path, spec, p);
  MlpSpec spec2;
  ParamSet q = load_params(path, &spec2);
  REQUIRE(q.count() == p.count());
  for (size_t i = 0; i < p.count(); ++i) CHECK(p.flat()[i] == q.flat()[i]);
  CHECK(spec2.embedding.has_value());
  CHECK(spec2.embedding->modes == 4);
  fs::remove(path);
}

TEST_CASE("flat view round-trips through the tensor views") {
  MlpSpec spec = small_spec(3, 5, 2, 2);
  ParamSet p = init_glorot(spec, math::Rng(1));
  size_t total = 0;
  for (int t = 0; t < p.num_tensors(); ++t) {
    auto view = p.tensor(t);
    const auto& d = p.desc(t);
    for (size_t i = 0; i < view.size(); ++i) CHECK(view[i] == p.flat()[d.offset + i]);
    total += view.size();
  }
  CHECK(total == p.count());
}
