#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "capinn/math/rng.hpp"
#include "capinn/pde/problem.hpp"

namespace capinn::pde {

struct SamplePlan {
  int n_interior = 1000;
  int n_boundary = 100;
  int n_initial = 100;
  int n_test = 4096;
  uint64_t seed = 1;
  bool resample_each_iter = false;
};

struct SampleSets {
  PointSet interior;   // (x, t) in Omega x [t0, t1]
  PointSet boundary;   // empty when the boundary is hard-constrained
  PointSet initial;    // (x, t0)
  PointSet test;       // fixed across seeds and optimizer configurations
  std::vector<double> boundary_targets;  // n_boundary x outputs
  std::vector<double> initial_targets;   // n_initial x outputs
  std::vector<double> test_exact;        // n_test x outputs, when available
};

// Uniform i.i.d. sampling from the problem's manifolds. The test stream is
// keyed by the problem name only, so it is identical across run seeds and
// optimizer configurations. `window` scopes the interior/boundary time range
// and rng streams for time marching; the initial x-grid is drawn from a
// window-independent stream so handoff targets live on one fixed grid.
SampleSets sample_domain(const Problem& problem, const SamplePlan& plan, int window = 0,
                         double t_lo = -1.0, double t_hi = -1.0);

// Re-draws the interior set only (per-iteration resampling).
PointSet sample_interior(const Problem& problem, const SamplePlan& plan, uint64_t stream,
                         double t_lo, double t_hi, int count);

uint64_t fnv1a(std::string_view s);

}  // namespace capinn::pde
