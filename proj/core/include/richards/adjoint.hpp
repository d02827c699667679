#pragma once

#include <functional>
#include <span>
#include <vector>

#include "richards/forward.hpp"
#include "richards/grid.hpp"
#include "richards/soil.hpp"

namespace richards {

/// Adjoint state p on the same grid as the state field, stored time-major.
/// Terminal row (n = Nt-1) and both boundary columns are exactly zero.
struct AdjointField {
  Grid1D grid;
  std::vector<double> values;

  double operator()(int i, int n) const { return values[static_cast<size_t>(n) * grid.Nz + i]; }
  double& at(int i, int n) { return values[static_cast<size_t>(n) * grid.Nz + i]; }
};

/// Per-node coefficient providers (space index, time level) for the generic
/// backward solve. Tests inject frozen coefficients and prescribed sources
/// through these.
struct AdjointCoefficients {
  std::function<double(int, int)> beta;       // diffusion coefficient, > 0
  std::function<double(int, int)> advection;  // dK/dtheta at the state, >= 0
  std::function<double(int, int)> source;
  std::function<double(int, int)> reaction;   // df/dtheta at the state, optional
};

/// Backward-in-time implicit Euler for
///   p_t + beta p_zz + a p_z + c p = F,  p(z,T) = 0,  p(0,t) = p(Z,t) = 0,
/// integrated in reversed time with centered second differences (nodal beta,
/// non-divergence form) and first-order upwinding of the advection term.
/// The problem is linear; each step is one diagonally dominant tridiagonal
/// solve, evaluated with coefficients at the target time level.
AdjointField solve_adjoint_with(const Grid1D& grid, const AdjointCoefficients& coeffs);

/// Adjoint solve around a state trajectory, with beta_eps, dK/dtheta and the
/// tracking source evaluated at the state's native time levels. The source is
/// (1 - f(theta)) df/dtheta and the reaction coefficient df/dtheta: the
/// stationarity condition of the Lagrangian puts the sink's linearization on
/// the left and flips the tracking term relative to the reduced form
/// F = (f - 1) df/dtheta (the finite-difference test on the reduced cost is
/// the arbiter of both signs). With track_normalized the tracking source uses
/// the normalized shape f_hat instead of f.
AdjointField solve_adjoint(const SoilModel& soil, const FeddesUptake& uptake,
                           const DiffusivityRegularization& reg, const StateField& theta_star,
                           bool track_normalized = false);

/// Surface multiplier series p1(t_n) = beta_eps(theta*(0,t_n)) dp/dz|_{z=0},
/// with a second-order one-sided stencil (exact for quadratics). This is the
/// state-dependent part of the cost gradient.
std::vector<double> boundary_flux_gradient(const SoilModel& soil,
                                           const DiffusivityRegularization& reg,
                                           const StateField& theta_star, const AdjointField& p);

/// Bottom multiplier series p2(t_n) = -beta_eps(theta*(Z,t_n)) dp/dz|_{z=Z}.
/// Diagnostic only: the control acts at the surface.
std::vector<double> bottom_boundary_flux(const SoilModel& soil,
                                         const DiffusivityRegularization& reg,
                                         const StateField& theta_star, const AdjointField& p);

}  // namespace richards
