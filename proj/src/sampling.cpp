#include "capinn/pde/sampling.hpp"

namespace capinn::pde {

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= uint64_t(uint8_t(c));
    h *= 0x100000001b3ULL;
  }
  return h;
}

PointSet sample_interior(const Problem& problem, const SamplePlan& plan, uint64_t stream,
                         double t_lo, double t_hi, int count) {
  const auto& info = problem.info();
  const int d = info.spatial_dim;
  math::Rng rng = math::Rng(plan.seed).split(stream);
  PointSet pts;
  pts.resize(count, d + 1);
  for (int i = 0; i < count; ++i) {
    auto row = pts.row(i);
    for (int a = 0; a < d; ++a) row[a] = rng.uniform(info.lo[a], info.hi[a]);
    row[d] = rng.uniform(t_lo, t_hi);
  }
  return pts;
}

SampleSets sample_domain(const Problem& problem, const SamplePlan& plan, int window,
                         double t_lo, double t_hi) {
  const auto& info = problem.info();
  const int d = info.spatial_dim;
  if (t_lo < 0.0 && t_hi < 0.0) {
    t_lo = info.t0;
    t_hi = info.t1;
  }
  SampleSets sets;

  sets.interior =
      sample_interior(problem, plan, 10 + uint64_t(window), t_lo, t_hi, plan.n_interior);

  if (!info.hard_periodic_bc && plan.n_boundary > 0) {
    math::Rng rng = math::Rng(plan.seed).split(20 + uint64_t(window));
    sets.boundary.resize(plan.n_boundary, d + 1);
    sets.boundary_targets.resize(size_t(plan.n_boundary) * info.outputs);
    for (int i = 0; i < plan.n_boundary; ++i) {
      auto row = sets.boundary.row(i);
      const uint64_t face = rng.below(uint64_t(2 * d));
      const int axis = int(face / 2);
      const bool high = face % 2;
      for (int a = 0; a < d; ++a) row[a] = rng.uniform(info.lo[a], info.hi[a]);
      row[axis] = high ? info.hi[axis] : info.lo[axis];
      row[d] = rng.uniform(t_lo, t_hi);
      problem.boundary_target(row, std::span<double>(sets.boundary_targets)
                                       .subspan(size_t(i) * info.outputs, info.outputs));
    }
  }

  if (plan.n_initial > 0) {
    // window-independent stream: one fixed x-grid for all windows
    math::Rng rng = math::Rng(plan.seed).split(30);
    sets.initial.resize(plan.n_initial, d + 1);
    sets.initial_targets.resize(size_t(plan.n_initial) * info.outputs);
    for (int i = 0; i < plan.n_initial; ++i) {
      auto row = sets.initial.row(i);
      for (int a = 0; a < d; ++a) row[a] = rng.uniform(info.lo[a], info.hi[a]);
      row[d] = t_lo;
      problem.initial(row.subspan(0, d), std::span<double>(sets.initial_targets)
                                             .subspan(size_t(i) * info.outputs, info.outputs));
    }
  }

  if (plan.n_test > 0) {
    math::Rng rng = math::Rng(0x7E57C0DEULL ^ fnv1a(info.name)).split(0);
    sets.test.resize(plan.n_test, d + 1);
    if (info.has_exact) sets.test_exact.resize(size_t(plan.n_test) * info.outputs);
    for (int i = 0; i < plan.n_test; ++i) {
      auto row = sets.test.row(i);
      for (int a = 0; a < d; ++a) row[a] = rng.uniform(info.lo[a], info.hi[a]);
      row[d] = rng.uniform(info.t0, info.t1);
      if (info.has_exact)
        problem.exact(row, std::span<double>(sets.test_exact)
                               .subspan(size_t(i) * info.outputs, info.outputs));
    }
  }
  return sets;
}

}  // namespace capinn::pde
