#include "richards/forward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "richards/errors.hpp"
#include "richards/tridiag.hpp"

namespace richards {

namespace {

// Clamp adjustments below this are floating-point housekeeping, not events.
constexpr double kClampCountThreshold = 1e-12;

void check_sizes(const Grid1D& grid, std::span<const double> ic, const BoundaryData& bc) {
  if (grid.Nz < 3 || grid.Nt < 2)
    throw ValidationError("grid: need Nz >= 3 and Nt >= 2");
  if (static_cast<int>(ic.size()) != grid.Nz)
    throw ValidationError("initial profile length does not match grid.Nz");
  if (static_cast<int>(bc.top.size()) != grid.Nt ||
      static_cast<int>(bc.bottom.size()) != grid.Nt)
    throw ValidationError("boundary series length does not match grid.Nt");
}

}  // namespace

StateField solve_forward_with(const Grid1D& grid, std::span<const double> ic,
                              const BoundaryData& bc, const ForwardCoefficients& coeffs,
                              const PicardControls& controls) {
  check_sizes(grid, ic, bc);
  const int Nz = grid.Nz;
  const int Nt = grid.Nt;
  const double dz = grid.dz();
  const double dt = grid.dt();
  const double dz2 = dz * dz;

  StateField field;
  field.grid = grid;
  field.values.assign(static_cast<size_t>(Nz) * Nt, 0.0);
  field.clamp_events_per_level.assign(Nt, 0);

  auto clamp_count = [&](double v, int level) {
    const double c = std::clamp(v, coeffs.clamp_lo, coeffs.clamp_hi);
    if (std::fabs(c - v) > kClampCountThreshold) {
      ++field.clamp_events_per_level[level];
      ++field.clamp_events;
      if (v > coeffs.clamp_hi) field.saturation_warning = true;
    }
    return c;
  };

  for (int i = 0; i < Nz; ++i) field.at(i, 0) = clamp_count(ic[i], 0);

  const int m = Nz - 2;  // interior unknowns
  std::vector<double> cur(Nz), beta_node(Nz), k_node(Nz), sink_node(Nz);
  std::vector<double> sub(m - 1), diag(m), sup(m - 1), rhs(m), sol(m);
  TridiagonalSolver thomas(m);

  const bool have_gravity = static_cast<bool>(coeffs.conductivity);
  const bool have_sink = static_cast<bool>(coeffs.sink);

  std::copy(field.row(0).begin(), field.row(0).end(), cur.begin());

  for (int n = 1; n < Nt; ++n) {
    cur[0] = bc.top[n];
    cur[Nz - 1] = bc.bottom[n];

    bool converged = false;
    double update = 0.0;
    for (int sweep = 0; sweep < controls.maxit; ++sweep) {
      for (int i = 0; i < Nz; ++i) {
        beta_node[i] = coeffs.beta(cur[i]);
        if (have_gravity) k_node[i] = coeffs.conductivity(cur[i]);
        if (have_sink) sink_node[i] = coeffs.sink(cur[i]);
      }
      for (int i = 1; i <= Nz - 2; ++i) {
        const double bw = 0.5 * (beta_node[i - 1] + beta_node[i]);
        const double be = 0.5 * (beta_node[i] + beta_node[i + 1]);
        const int r = i - 1;
        diag[r] = 1.0 / dt + (bw + be) / dz2;
        double b = field(i, n - 1) / dt;
        if (have_gravity) b -= (k_node[i] - k_node[i - 1]) / dz;  // upwind, flow downward
        if (have_sink) b += sink_node[i];
        if (i == 1)
          b += bw / dz2 * cur[0];
        else
          sub[r - 1] = -bw / dz2;
        if (i == Nz - 2)
          b += be / dz2 * cur[Nz - 1];
        else
          sup[r] = -be / dz2;
        rhs[r] = b;
      }
      thomas.solve(sub, diag, sup, rhs, sol);

      update = 0.0;
      for (int i = 1; i <= Nz - 2; ++i) {
        const double v = clamp_count(sol[i - 1], n);
        update = std::max(update, std::fabs(v - cur[i]));
        cur[i] = v;
      }
      if (update < controls.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "Picard iteration at time level " << n << " (t = " << grid.t(n)
         << ") did not reach tol = " << controls.tol << " within " << controls.maxit
         << " sweeps; last update = " << update;
      throw PicardDivergence(n, update, os.str());
    }
    field.max_step_update = std::max(field.max_step_update, update);
    for (int i = 0; i < Nz; ++i) field.at(i, n) = cur[i];
  }
  return field;
}

StateField solve_forward(const SoilModel& soil, const FeddesUptake& fu,
                         const DiffusivityRegularization& reg, const Grid1D& grid,
                         std::span<const double> ic, const BoundaryData& bc,
                         const PicardControls& controls) {
  check_sizes(grid, ic, bc);
  const auto report = soil.validate_quasi_unsaturated();
  if (!report.valid) {
    std::string msg = "solve_forward: soil fails quasi-unsaturated admissibility:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  const double tr = soil.theta_r();
  const double tS = soil.theta_S();
  for (int n = 0; n < grid.Nt; ++n) {
    // u = 0 puts the surface exactly at theta_r, so the lower bound is closed
    if (!(bc.top[n] >= tr && bc.top[n] < tS) || !(bc.bottom[n] >= tr && bc.bottom[n] < tS)) {
      std::ostringstream os;
      os << "boundary data at time level " << n << " outside [theta_r, theta_S): top = "
         << bc.top[n] << ", bottom = " << bc.bottom[n];
      throw InvalidBoundary(os.str());
    }
  }

  ForwardCoefficients coeffs;
  coeffs.clamp_lo = tr;
  coeffs.clamp_hi = tS - 0.5 * reg.epsilon;
  coeffs.beta = [&soil, &reg, lo = tr + 1e-12](double theta) {
    return diffusivity_regularized(soil, reg, std::max(theta, lo));
  };
  coeffs.conductivity = [&soil](double theta) {
    return soil.conductivity_of_theta(soil.clamp_theta(theta));
  };
  if (fu.varphi != 0.0) {
    coeffs.sink = [&fu, &soil](double theta) {
      return uptake(fu, soil, soil.clamp_theta(theta));
    };
  }
  return solve_forward_with(grid, ic, bc, coeffs, controls);
}

double mass_balance_residual(const StateField& field, const SoilModel& soil,
                             const FeddesUptake& fu, const DiffusivityRegularization& reg) {
  const Grid1D& grid = field.grid;
  const int Nz = grid.Nz;
  const int Nt = grid.Nt;
  const double dz = grid.dz();
  const double dt = grid.dt();

  auto beta_at = [&](double theta) {
    return diffusivity_regularized(soil, reg, soil.clamp_theta(theta));
  };
  auto k_at = [&](double theta) { return soil.conductivity_of_theta(soil.clamp_theta(theta)); };
  auto f_at = [&](double theta) {
    return fu.varphi == 0.0 ? 0.0 : uptake(fu, soil, soil.clamp_theta(theta));
  };

  auto trapz_row = [&](int n, auto&& fn) {
    double s = 0.5 * (fn(field(0, n)) + fn(field(Nz - 1, n)));
    for (int i = 1; i < Nz - 1; ++i) s += fn(field(i, n));
    return s * dz;
  };
  auto identity = [](double v) { return v; };

  const double mass0 = trapz_row(0, identity);
  const double massT = trapz_row(Nt - 1, identity);

  // net boundary influx and source per time level, with the scheme's
  // interface diffusivities and upwind conductivities
  std::vector<double> net(Nt), src(Nt);
  for (int n = 0; n < Nt; ++n) {
    const double b_top = 0.5 * (beta_at(field(0, n)) + beta_at(field(1, n)));
    const double b_bot = 0.5 * (beta_at(field(Nz - 2, n)) + beta_at(field(Nz - 1, n)));
    const double q_in = -b_top * (field(1, n) - field(0, n)) / dz + k_at(field(0, n));
    const double q_out =
        -b_bot * (field(Nz - 1, n) - field(Nz - 2, n)) / dz + k_at(field(Nz - 2, n));
    net[n] = q_in - q_out;
    src[n] = trapz_row(n, f_at);
  }
  auto trapz_time = [&](const std::vector<double>& v) {
    double s = 0.5 * (v.front() + v.back());
    for (int n = 1; n < Nt - 1; ++n) s += v[n];
    return s * dt;
  };

  const double dmass = massT - mass0;
  const double defect = dmass - trapz_time(net) - trapz_time(src);
  const double floor = 0.01 * std::fabs(mass0);
  return std::fabs(defect) / std::max(std::fabs(dmass), floor);
}

}  // namespace richards
