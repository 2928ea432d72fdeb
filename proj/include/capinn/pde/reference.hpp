#pragma once

#include <vector>

#include "capinn/pde/problem.hpp"

namespace capinn::pde {

// Space-time grid of reference values for problems without an analytic
// solution (Gray-Scott, BZ). Produced by the shipped method-of-lines
// integrator; consumed as the evaluation "exact" solution.
struct ReferenceGrid {
  int comps = 0;
  std::vector<double> x;     // nx spatial nodes
  std::vector<double> t;     // nt snapshot times
  std::vector<double> vals;  // [comp][ti][xi]

  double value(int comp, int ti, int xi) const {
    return vals[(size_t(comp) * t.size() + ti) * x.size() + xi];
  }
};

// Method-of-lines integration of a 1-D periodic reaction-diffusion system:
// second-order central differences in space, classic RK4 in time. dt_target
// is rounded down so snapshots land exactly on integration steps.
ReferenceGrid integrate_reference(const Problem& prob, int nx, int snapshots,
                                  double dt_target);

}  // namespace capinn::pde
