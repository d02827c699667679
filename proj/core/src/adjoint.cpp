#include "richards/adjoint.hpp"

#include <cmath>
#include <vector>

#include "richards/errors.hpp"
#include "richards/feddes.hpp"
#include "richards/tridiag.hpp"

namespace richards {

AdjointField solve_adjoint_with(const Grid1D& grid, const AdjointCoefficients& coeffs) {
  const int Nz = grid.Nz;
  const int Nt = grid.Nt;
  const double dz = grid.dz();
  const double dt = grid.dt();
  const double dz2 = dz * dz;

  AdjointField p;
  p.grid = grid;
  p.values.assign(static_cast<size_t>(Nz) * Nt, 0.0);

  const int m = Nz - 2;
  std::vector<double> sub(m - 1), diag(m), sup(m - 1), rhs(m), sol(m);
  TridiagonalSolver thomas(m);

  // reversed time tau = T - t; information of the advection term a p_z
  // travels toward decreasing z, so the upwind difference looks at i+1
  for (int n = Nt - 2; n >= 0; --n) {
    for (int i = 1; i <= Nz - 2; ++i) {
      const double beta = coeffs.beta(i, n);
      const double a = coeffs.advection ? coeffs.advection(i, n) : 0.0;
      const double c = coeffs.reaction ? coeffs.reaction(i, n) : 0.0;
      const int r = i - 1;
      diag[r] = 1.0 / dt + 2.0 * beta / dz2 + a / dz - c;
      if (i > 1) sub[r - 1] = -beta / dz2;
      if (i < Nz - 2) sup[r] = -(beta / dz2 + a / dz);
      rhs[r] = p(i, n + 1) / dt - (coeffs.source ? coeffs.source(i, n) : 0.0);
      // boundary columns are identically zero; no rhs contribution
    }
    thomas.solve(sub, diag, sup, rhs, sol);
    for (int i = 1; i <= Nz - 2; ++i) p.at(i, n) = sol[i - 1];
  }
  return p;
}

AdjointField solve_adjoint(const SoilModel& soil, const FeddesUptake& fu,
                           const DiffusivityRegularization& reg, const StateField& theta_star,
                           bool track_normalized) {
  const Grid1D& grid = theta_star.grid;
  AdjointCoefficients coeffs;
  coeffs.beta = [&](int i, int n) {
    return diffusivity_regularized(soil, reg, soil.clamp_theta(theta_star(i, n)));
  };
  coeffs.advection = [&](int i, int n) { return soil.dK_dtheta(soil.clamp_theta(theta_star(i, n))); };
  if (fu.varphi != 0.0) {
    // tracking source with the sign that makes the boundary flux the actual
    // descent information: (1 - f) f' = -[(f - 1) f']
    if (track_normalized) {
      coeffs.source = [&](int i, int n) {
        return -adjoint_source_normalized(fu, soil, soil.clamp_theta(theta_star(i, n)));
      };
    } else {
      coeffs.source = [&](int i, int n) {
        return -adjoint_source(fu, soil, soil.clamp_theta(theta_star(i, n)));
      };
    }
    coeffs.reaction = [&](int i, int n) {
      return uptake_dtheta(fu, soil, soil.clamp_theta(theta_star(i, n)));
    };
  }
  return solve_adjoint_with(grid, coeffs);
}

namespace {

std::vector<double> one_sided_flux(const SoilModel& soil, const DiffusivityRegularization& reg,
                                   const StateField& theta_star, const AdjointField& p,
                                   bool at_bottom) {
  if (!(theta_star.grid == p.grid))
    throw ValidationError("boundary flux: state and adjoint grids differ");
  const Grid1D& grid = p.grid;
  const int Nz = grid.Nz;
  const double dz = grid.dz();
  std::vector<double> out(grid.Nt);
  for (int n = 0; n < grid.Nt; ++n) {
    double dpdz, beta;
    if (!at_bottom) {
      dpdz = (-3.0 * p(0, n) + 4.0 * p(1, n) - p(2, n)) / (2.0 * dz);
      beta = diffusivity_regularized(soil, reg, soil.clamp_theta(theta_star(0, n)));
      out[n] = beta * dpdz;
    } else {
      dpdz = (3.0 * p(Nz - 1, n) - 4.0 * p(Nz - 2, n) + p(Nz - 3, n)) / (2.0 * dz);
      beta = diffusivity_regularized(soil, reg, soil.clamp_theta(theta_star(Nz - 1, n)));
      out[n] = -beta * dpdz;
    }
  }
  return out;
}

}  // namespace

std::vector<double> boundary_flux_gradient(const SoilModel& soil,
                                           const DiffusivityRegularization& reg,
                                           const StateField& theta_star, const AdjointField& p) {
  return one_sided_flux(soil, reg, theta_star, p, /*at_bottom=*/false);
}

std::vector<double> bottom_boundary_flux(const SoilModel& soil,
                                         const DiffusivityRegularization& reg,
                                         const StateField& theta_star, const AdjointField& p) {
  return one_sided_flux(soil, reg, theta_star, p, /*at_bottom=*/true);
}

}  // namespace richards
