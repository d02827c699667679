#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "richards/feddes.hpp"
#include "richards/grid.hpp"
#include "richards/soil.hpp"

namespace richards {

/// Dirichlet data per time level. top[n] is the surface value v(t_n)
/// (= theta_r + u(t_n) when driven by a control), bottom[n] the value g(t_n)
/// below the root zone. Both series have Nt entries.
struct BoundaryData {
  std::vector<double> top;
  std::vector<double> bottom;
};

struct PicardControls {
  double tol = 1e-8;  // max-norm update threshold, theta units
  int maxit = 50;
};

/// Water content on the full space-time grid, stored time-major
/// (values[n*Nz + i]). The initial row is the (possibly clamped) initial
/// profile; boundary columns hold the Dirichlet series from the first time
/// step onward -- at t = 0 the initial profile takes precedence.
struct StateField {
  Grid1D grid;
  std::vector<double> values;

  // solver diagnostics
  bool saturation_warning = false;         // some iterate exceeded the upper clamp
  std::vector<long> clamp_events_per_level;
  long clamp_events = 0;
  double max_step_update = 0.0;            // worst accepted Picard update, theta units

  double operator()(int i, int n) const { return values[static_cast<size_t>(n) * grid.Nz + i]; }
  double& at(int i, int n) { return values[static_cast<size_t>(n) * grid.Nz + i]; }
  std::span<const double> row(int n) const {
    return {values.data() + static_cast<size_t>(n) * grid.Nz, static_cast<size_t>(grid.Nz)};
  }
};

/// Coefficient providers for the generic kernel, as functions of water
/// content. Used directly by tests that freeze coefficients; the soil-bound
/// overload below fills these in from the constitutive relations.
struct ForwardCoefficients {
  std::function<double(double)> beta;          // diffusivity
  std::function<double(double)> conductivity;  // gravity flux K, or 0
  std::function<double(double)> sink;          // source term f, or 0
  double clamp_lo = -std::numeric_limits<double>::infinity();
  double clamp_hi = std::numeric_limits<double>::infinity();
};

/// Implicit-Euler / Picard kernel for
///   theta_t = d/dz(beta(theta) theta_z) - dK(theta)/dz + f(theta)
/// on the given grid: centered differences with arithmetic-mean interface
/// diffusivities, first-order upwind for the gravity term, coefficients
/// frozen at the previous Picard iterate, one tridiagonal solve per inner
/// iteration. Throws PicardDivergence if an inner iteration fails to meet
/// controls.tol within controls.maxit sweeps.
StateField solve_forward_with(const Grid1D& grid, std::span<const double> ic,
                              const BoundaryData& bc, const ForwardCoefficients& coeffs,
                              const PicardControls& controls = {});

/// State solve with the regularized soil constitutive relations and the
/// Feddes sink. Validates admissibility of the soil and the boundary series;
/// the initial profile is clamped into [theta_r, theta_S - epsilon/2] at
/// construction.
StateField solve_forward(const SoilModel& soil, const FeddesUptake& uptake,
                         const DiffusivityRegularization& reg, const Grid1D& grid,
                         std::span<const double> ic, const BoundaryData& bc,
                         const PicardControls& controls = {});

/// Discrete conservation diagnostic: |change of stored water - net boundary
/// influx - integrated source| normalized by max(|mass change|, 1% of the
/// initial storage). Trapezoidal quadrature in space and time; fluxes use the
/// scheme's interface diffusivities and upwind conductivities.
double mass_balance_residual(const StateField& field, const SoilModel& soil,
                             const FeddesUptake& uptake, const DiffusivityRegularization& reg);

}  // namespace richards
