#include "capinn/pde/reference.hpp"

#include <cmath>

namespace capinn::pde {

namespace {

// du/dt for all components at all nodes (periodic wrap).
void rhs(const Problem& prob, const std::vector<double>& diff, int nx, double inv_dx2,
         const std::vector<double>& u, std::vector<double>& out) {
  const int m = int(diff.size());
  std::vector<double> loc(m), react(m);
  for (int i = 0; i < nx; ++i) {
    const int im = (i == 0) ? nx - 1 : i - 1;
    const int ip = (i == nx - 1) ? 0 : i + 1;
    for (int c = 0; c < m; ++c) loc[c] = u[size_t(c) * nx + i];
    prob.reaction(loc, react);
    for (int c = 0; c < m; ++c) {
      const double lap =
          (u[size_t(c) * nx + im] - 2.0 * loc[c] + u[size_t(c) * nx + ip]) * inv_dx2;
      out[size_t(c) * nx + i] = diff[c] * lap + react[c];
    }
  }
}

}  // namespace

ReferenceGrid integrate_reference(const Problem& prob, int nx, int snapshots,
                                  double dt_target) {
  if (!prob.has_reference_rhs())
    throw ConfigError(prob.info().name + ": no reference integrator pieces");
  const auto& info = prob.info();
  const int m = info.outputs;
  const double lo = info.lo[0], hi = info.hi[0];
  const double dx = (hi - lo) / nx;  // periodic: node nx would alias node 0
  const double inv_dx2 = 1.0 / (dx * dx);

  std::vector<double> diff(m);
  prob.diffusion_coeffs(diff);

  ReferenceGrid grid;
  grid.comps = m;
  grid.x.resize(nx);
  for (int i = 0; i < nx; ++i) grid.x[i] = lo + i * dx;
  grid.t.resize(snapshots);
  grid.vals.assign(size_t(m) * snapshots * nx, 0.0);

  std::vector<double> u(size_t(m) * nx), k1(u.size()), k2(u.size()), k3(u.size()),
      k4(u.size()), tmp(u.size());
  std::vector<double> point(1), vals(m);
  for (int i = 0; i < nx; ++i) {
    point[0] = grid.x[i];
    prob.initial(point, vals);
    for (int c = 0; c < m; ++c) u[size_t(c) * nx + i] = vals[c];
  }

  const double horizon = info.t1 - info.t0;
  const double snap_dt = horizon / (snapshots - 1);
  // RK4 real-axis stability for the explicit diffusion operator
  double d_max = 0.0;
  for (double dcoef : diff) d_max = std::max(d_max, dcoef);
  const double dt_cfl = (d_max > 0.0) ? 0.8 * 2.785 * dx * dx / (4.0 * d_max) : dt_target;
  const double dt_use = std::min(dt_target, dt_cfl);
  const int sub = std::max(1, int(std::ceil(snap_dt / dt_use)));
  const double dt = snap_dt / sub;

  auto store = [&](int ti) {
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < nx; ++i)
        grid.vals[(size_t(c) * snapshots + ti) * nx + i] = u[size_t(c) * nx + i];
    grid.t[ti] = info.t0 + ti * snap_dt;
  };
  store(0);

  for (int ti = 1; ti < snapshots; ++ti) {
    for (int s = 0; s < sub; ++s) {
      rhs(prob, diff, nx, inv_dx2, u, k1);
      for (size_t q = 0; q < u.size(); ++q) tmp[q] = u[q] + 0.5 * dt * k1[q];
      rhs(prob, diff, nx, inv_dx2, tmp, k2);
      for (size_t q = 0; q < u.size(); ++q) tmp[q] = u[q] + 0.5 * dt * k2[q];
      rhs(prob, diff, nx, inv_dx2, tmp, k3);
      for (size_t q = 0; q < u.size(); ++q) tmp[q] = u[q] + dt * k3[q];
      rhs(prob, diff, nx, inv_dx2, tmp, k4);
      for (size_t q = 0; q < u.size(); ++q)
        u[q] += (dt / 6.0) * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
    }
    for (double v : u)
      if (!std::isfinite(v)) throw NonFiniteError("reference integration");
    store(ti);
  }
  return grid;
}

}  // namespace capinn::pde
