#include "richards/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "richards/errors.hpp"
#include "richards/feddes.hpp"
#include "richards/tridiag.hpp"

namespace richards {

std::string to_string(ExitReason reason) {
  switch (reason) {
    case ExitReason::Tolerance: return "Tolerance";
    case ExitReason::MaxIterations: return "MaxIterations";
    case ExitReason::LineSearchStall: return "LineSearchStall";
  }
  return "?";
}

BoundaryData ControlProblem::boundary_for(const ControlSignal& u) const {
  BoundaryData bc;
  bc.top.resize(u.values.size());
  const double tr = soil.theta_r();
  for (size_t n = 0; n < u.values.size(); ++n) bc.top[n] = tr + u.values[n];
  bc.bottom = bottom;
  return bc;
}

StateField ControlProblem::solve(const ControlSignal& u) const {
  return solve_forward(soil, uptake, reg, grid, ic, boundary_for(u), picard);
}

AdmissibleSet ControlProblem::admissible_set(double epsilon) const {
  return {0.0, soil.theta_S() - soil.theta_r() - epsilon};
}

namespace {

double trapezoid_weight(int k, int count, double step) {
  return (k == 0 || k == count - 1) ? 0.5 * step : step;
}

}  // namespace

double cost(const FeddesUptake& fu, const SoilModel& soil, const StateField& theta,
            const ControlSignal& u, double lambda, bool track_normalized) {
  const Grid1D& grid = theta.grid;
  if (!(u.grid == grid)) throw ValidationError("cost: control and state grids differ");
  const int Nz = grid.Nz;
  const int Nt = grid.Nt;
  const double dz = grid.dz();
  const double dt = grid.dt();

  auto f_at = [&](double th) {
    if (fu.varphi == 0.0) return 0.0;
    const double c = soil.clamp_theta(th);
    return track_normalized ? fu.uptake_hat(soil.pressure_head(c)) : uptake(fu, soil, c);
  };

  double tracking = 0.0;
  for (int n = 0; n < Nt; ++n) {
    const double wt = trapezoid_weight(n, Nt, dt);
    double row = 0.0;
    for (int i = 0; i < Nz; ++i) {
      const double d = f_at(theta(i, n)) - 1.0;
      row += trapezoid_weight(i, Nz, dz) * d * d;
    }
    tracking += wt * row;
  }
  double control = 0.0;
  for (int n = 0; n < Nt; ++n)
    control += trapezoid_weight(n, Nt, dt) * u.values[n] * u.values[n];

  return 0.5 * tracking + 0.5 * lambda * control;
}

double reduced_cost(const ControlProblem& problem, const ControlSignal& u) {
  const StateField theta = problem.solve(u);
  return cost(problem.uptake, problem.soil, theta, u, problem.lambda, problem.track_normalized);
}

std::vector<double> gradient(const ControlSignal& u, double lambda,
                             std::span<const double> boundary_flux) {
  if (u.values.size() != boundary_flux.size())
    throw ValidationError("gradient: series lengths differ");
  std::vector<double> g(u.values.size());
  for (size_t n = 0; n < g.size(); ++n) g[n] = lambda * u.values[n] + boundary_flux[n];
  return g;
}

std::vector<double> discrete_boundary_flux(const ControlProblem& problem,
                                           const ControlSignal& u, const StateField& theta) {
  const Grid1D& grid = theta.grid;
  if (!(u.grid == grid)) throw ValidationError("discrete_boundary_flux: grids differ");
  const int Nz = grid.Nz;
  const int Nt = grid.Nt;
  const int m = Nz - 2;
  const double dz = grid.dz();
  const double dt = grid.dt();
  const double dz2 = dz * dz;

  const SoilModel& soil = problem.soil;
  const FeddesUptake& fu = problem.uptake;
  const DiffusivityRegularization& reg = problem.reg;
  const bool sink_on = fu.varphi != 0.0;

  auto beta_at = [&](double th) {
    return diffusivity_regularized(soil, reg, soil.clamp_theta(th));
  };
  auto dbeta_at = [&](double th) {
    return dbeta_regularized_dtheta(soil, reg, soil.clamp_theta(th));
  };
  auto dK_at = [&](double th) { return soil.dK_dtheta(soil.clamp_theta(th)); };
  auto f_at = [&](double th) { return sink_on ? uptake(fu, soil, soil.clamp_theta(th)) : 0.0; };
  auto df_at = [&](double th) {
    return sink_on ? uptake_dtheta(fu, soil, soil.clamp_theta(th)) : 0.0;
  };
  // d/dtheta of the tracked misfit (f - 1) resp. (f_hat - 1)
  auto track_misfit = [&](double th) {
    if (!sink_on) return -1.0;
    const double f = f_at(th);
    return (problem.track_normalized ? f / fu.varphi : f) - 1.0;
  };
  auto track_dtheta = [&](double th) {
    if (!sink_on) return 0.0;
    const double d = df_at(th);
    return problem.track_normalized ? d / fu.varphi : d;
  };
  auto wt = [&](int n) { return (n == 0 || n == Nt - 1) ? 0.5 * dt : dt; };

  std::vector<double> flux(Nt, 0.0);
  std::vector<double> psi(m, 0.0), psi_next(m, 0.0);
  std::vector<double> sub(m - 1), diag(m), sup(m - 1), rhs(m);
  std::vector<double> beta(Nz), dbeta(Nz), delta(Nz - 1);
  TridiagonalSolver thomas(m);

  // multiplier sweep: (dR^n/dtheta^n)^T psi^n = dJ/dtheta^n + psi^{n+1}/dt,
  // running backward from the final level
  for (int n = Nt - 1; n >= 1; --n) {
    for (int i = 0; i < Nz; ++i) {
      beta[i] = beta_at(theta(i, n));
      dbeta[i] = dbeta_at(theta(i, n));
    }
    for (int i = 0; i < Nz - 1; ++i) delta[i] = theta(i + 1, n) - theta(i, n);

    for (int j = 1; j <= Nz - 2; ++j) {
      const int r = j - 1;
      const double bw = 0.5 * (beta[j - 1] + beta[j]);  // interface j-1/2
      const double be = 0.5 * (beta[j] + beta[j + 1]);  // interface j+1/2
      // dR_j/dtheta_j
      diag[r] = 1.0 / dt - (0.5 * dbeta[j] * delta[j] - be - (0.5 * dbeta[j] * delta[j - 1] + bw)) / dz2 +
                dK_at(theta(j, n)) / dz - df_at(theta(j, n));
      // transpose couplings: row j picks up dR_{j-1}/dtheta_j and dR_{j+1}/dtheta_j
      if (j > 1)  // dR_{j-1}/dtheta_j
        sub[r - 1] = -(0.5 * dbeta[j] * delta[j - 1] + 0.5 * (beta[j - 1] + beta[j])) / dz2;
      if (j < Nz - 2)  // dR_{j+1}/dtheta_j
        sup[r] = (0.5 * dbeta[j] * delta[j] - 0.5 * (beta[j] + beta[j + 1])) / dz2 -
                 dK_at(theta(j, n)) / dz;
      rhs[r] = wt(n) * dz * track_misfit(theta(j, n)) * track_dtheta(theta(j, n)) +
               psi_next[r] / dt;
    }
    thomas.solve(sub, diag, sup, rhs, psi);

    // dJ/du_n = wt(n) [lambda u_n + flux_n]: the direct boundary-node
    // tracking term plus the multiplier contraction with dR_1/dtheta_0
    const double th0 = theta(0, n);
    const double dR1_dtheta0 =
        (0.5 * dbeta_at(th0) * delta[0] - 0.5 * (beta[0] + beta[1])) / dz2 - dK_at(th0) / dz;
    flux[n] = 0.5 * dz * track_misfit(th0) * track_dtheta(th0) -
              psi[0] * dR1_dtheta0 / wt(n);
    std::swap(psi, psi_next);
  }
  return flux;
}

ControlSignal project(const ControlSignal& u, const AdmissibleSet& set) {
  ControlSignal out = u;
  for (double& v : out.values) v = std::clamp(v, set.lower, set.upper);
  return out;
}

namespace {

struct CostEval {
  double J;
  long clamp_events;
};

CostEval evaluate(const ControlProblem& problem, const ControlSignal& u) {
  const StateField theta = problem.solve(u);
  return {cost(problem.uptake, problem.soil, theta, u, problem.lambda, problem.track_normalized),
          theta.clamp_events};
}

ControlSignal stepped(const ControlSignal& u, std::span<const double> r, double s,
                      const AdmissibleSet& set) {
  ControlSignal c = u;
  for (size_t n = 0; n < c.values.size(); ++n)
    c.values[n] = std::clamp(c.values[n] + s * r[n], set.lower, set.upper);
  return c;
}

}  // namespace

LineSearchResult line_search(const ControlProblem& problem, const ControlSignal& u,
                             std::span<const double> r, double current_cost,
                             const AdmissibleSet& set, const LineSearchConfig& config) {
  LineSearchResult result;
  result.candidate_cost = current_cost;

  double rmax = 0.0;
  for (double v : r) rmax = std::max(rmax, std::fabs(v));
  // numerically-zero directions cannot move J by more than rounding noise
  if (rmax * (set.upper - set.lower) < 1e-13 * std::max(1.0, std::fabs(current_cost)))
    return result;  // stationary: s = 0, J unchanged

  const double s_max = config.bracket_scale * (set.upper - set.lower) / rmax;

  double best_s = 0.0;
  double best_J = current_cost;
  bool improved = false;
  bool any_moved = false;
  auto probe = [&](double s) {
    const ControlSignal candidate = stepped(u, r, s, set);
    ++result.evaluations;
    if (candidate.values == u.values) return current_cost;  // projection ate the step
    any_moved = true;
    double J;
    try {
      const CostEval e = evaluate(problem, candidate);
      result.clamp_events += e.clamp_events;
      J = e.J;
    } catch (const PicardDivergence&) {
      // an aggressive probe can push the state solver past its iteration
      // budget; score it out of contention instead of aborting the search
      return std::numeric_limits<double>::infinity();
    }
    if (J < best_J) {
      best_J = J;
      best_s = s;
      improved = true;
    }
    return J;
  };

  // golden-section on [0, s_max], keeping a slice of the budget for
  // backtracking in case the minimizer hides closer to 0 than the bracket
  // resolution reaches
  const int reserve = std::min(6, config.max_evals / 3);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = s_max;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = probe(x1);
  double f2 = probe(x2);
  while (result.evaluations < config.max_evals - reserve) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = probe(x2);
    }
  }
  if (!improved) {
    double s = std::min(x1, x2) / 8.0;
    while (result.evaluations < config.max_evals && s > 0.0) {
      probe(s);
      if (improved) break;
      s /= 8.0;
    }
  } else {
    while (result.evaluations < config.max_evals) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - invphi * (b - a);
        f1 = probe(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + invphi * (b - a);
        f2 = probe(x2);
      }
    }
  }

  if (!improved) {
    if (!any_moved) return result;  // projected-stationary: s = 0, J unchanged
    std::ostringstream os;
    os << "line search exhausted " << result.evaluations
       << " evaluations without improving on J = " << current_cost;
    throw LineSearchStall(os.str());
  }
  result.step = best_s;
  result.candidate_cost = best_J;
  return result;
}

namespace {

double projected_gradient_norm(const ControlSignal& u, std::span<const double> g,
                               const AdmissibleSet& set) {
  double norm = 0.0;
  for (size_t n = 0; n < u.values.size(); ++n) {
    const double moved = std::clamp(u.values[n] - g[n], set.lower, set.upper);
    norm = std::max(norm, std::fabs(u.values[n] - moved));
  }
  return norm;
}

}  // namespace

OptimizationReport pgd(const ControlProblem& problem, const PgdConfig& config,
                       const ControlSignal& u0) {
  ControlProblem prob = problem;
  prob.lambda = config.lambda;
  prob.track_normalized = config.track_normalized;
  prob.picard = config.picard();
  prob.reg.epsilon = config.epsilon;

  const AdmissibleSet set = prob.admissible_set(config.epsilon);

  OptimizationReport report;
  ControlSignal u = project(u0, set);

  auto with_iteration_context = [](const PicardDivergence& e, int iter) {
    std::ostringstream os;
    os << "PGD iteration " << iter << ": " << e.what();
    return PicardDivergence(e.time_level(), e.residual(), os.str());
  };

  for (int iter = 1; iter <= config.maxit; ++iter) {
    StateField theta;
    try {
      theta = prob.solve(u);
    } catch (const PicardDivergence& e) {
      throw with_iteration_context(e, iter);
    }
    report.clamp_events += theta.clamp_events;
    ++report.reduced_cost_evals;
    const double J =
        cost(prob.uptake, prob.soil, theta, u, config.lambda, config.track_normalized);
    report.cost_history.push_back(J);

    AdjointField p = solve_adjoint(prob.soil, prob.uptake, prob.reg, theta,
                                   config.track_normalized);
    const std::vector<double> flux = discrete_boundary_flux(prob, u, theta);
    const std::vector<double> g = gradient(u, config.lambda, flux);

    const double pg_norm = projected_gradient_norm(u, g, set);
    if (iter == 1) report.projected_gradient_norm_initial = pg_norm;
    report.projected_gradient_norm_final = pg_norm;

    std::vector<double> r(g.size());
    for (size_t n = 0; n < g.size(); ++n) r[n] = -g[n];

    LineSearchResult ls;
    try {
      ls = line_search(prob, u, r, J, set, config.linesearch);
    } catch (const PicardDivergence& e) {
      throw with_iteration_context(e, iter);
    } catch (const LineSearchStall&) {
      report.iterations = iter;
      report.exit_reason = ExitReason::LineSearchStall;
      report.final_control = u;
      report.final_state = std::move(theta);
      report.final_adjoint = std::move(p);
      return report;
    }
    report.reduced_cost_evals += ls.evaluations;
    report.clamp_events += ls.clamp_events;

    if (std::fabs(ls.candidate_cost - J) < config.tol) {
      report.iterations = iter;
      report.exit_reason = ExitReason::Tolerance;
      report.final_control = u;
      report.final_state = std::move(theta);
      report.final_adjoint = std::move(p);
      return report;
    }
    u = stepped(u, r, ls.step, set);
  }

  // iteration cap: cost the last accepted control so the history covers it
  StateField theta = prob.solve(u);
  report.clamp_events += theta.clamp_events;
  ++report.reduced_cost_evals;
  report.cost_history.push_back(
      cost(prob.uptake, prob.soil, theta, u, config.lambda, config.track_normalized));
  AdjointField p =
      solve_adjoint(prob.soil, prob.uptake, prob.reg, theta, config.track_normalized);
  report.iterations = config.maxit;
  report.exit_reason = ExitReason::MaxIterations;
  report.final_control = u;
  report.final_state = std::move(theta);
  report.final_adjoint = std::move(p);
  return report;
}

GradientCheckResult gradient_check(const ControlProblem& problem, const PgdConfig& config,
                                   int num_directions, double fd_step, std::uint32_t seed) {
  ControlProblem prob = problem;
  prob.lambda = config.lambda;
  prob.track_normalized = config.track_normalized;
  prob.reg.epsilon = config.epsilon;
  // FD quotients need the nonlinear solves converged well below the step
  prob.picard = {std::min(config.picard_tol, 1e-12), std::max(config.picard_maxit, 200)};

  const AdmissibleSet set = prob.admissible_set(config.epsilon);
  const Grid1D& grid = prob.grid;

  ControlSignal base{grid, std::vector<double>(grid.Nt, 0.2 * set.upper)};

  const StateField theta = prob.solve(base);
  const std::vector<double> flux = discrete_boundary_flux(prob, base, theta);
  const std::vector<double> g = gradient(base, config.lambda, flux);

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  GradientCheckResult result;
  const double dt = grid.dt();
  for (int d = 0; d < num_directions; ++d) {
    std::vector<double> du(grid.Nt);
    for (double& v : du) v = uni(rng);

    double inner = 0.0;
    for (int n = 0; n < grid.Nt; ++n)
      inner += trapezoid_weight(n, grid.Nt, dt) * g[n] * du[n];

    ControlSignal up = base, dn = base;
    for (int n = 0; n < grid.Nt; ++n) {
      up.values[n] += fd_step * du[n];
      dn.values[n] -= fd_step * du[n];
    }
    const double fd = (reduced_cost(prob, up) - reduced_cost(prob, dn)) / (2.0 * fd_step);

    const double rel = std::fabs(inner - fd) / std::max(std::fabs(fd), 1e-300);
    result.relative_errors.push_back(rel);
    result.max_relative_error = std::max(result.max_relative_error, rel);
  }
  return result;
}

}  // namespace richards
