#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "richards/adjoint.hpp"
#include "richards/forward.hpp"
#include "richards/grid.hpp"
#include "richards/soil.hpp"

namespace richards {

/// Surface control u(t_n): the water-content offset above theta_r imposed at
/// the top boundary, one value per time level.
struct ControlSignal {
  Grid1D grid;
  std::vector<double> values;

  bool operator==(const ControlSignal&) const = default;
};

/// Box constraint on the control. The upper bound keeps the surface value
/// out of the truncated zone: theta_S - theta_r - epsilon.
struct AdmissibleSet {
  double lower = 0.0;
  double upper = 0.0;
};

struct LineSearchConfig {
  int max_evals = 20;          // reduced-cost evaluation budget
  double bracket_scale = 1.0;  // s_max = bracket_scale * box height / max|r|

  bool operator==(const LineSearchConfig&) const = default;
};

struct PgdConfig {
  int maxit = 100;
  double tol = 1e-5;       // |J(candidate) - J(current)| exit threshold
  double lambda = 0.1;     // control-cost weight
  double epsilon = 1e-3;   // diffusivity truncation margin (also projection margin)
  double picard_tol = 1e-8;
  int picard_maxit = 50;
  LineSearchConfig linesearch;
  bool track_normalized = false;  // track f_hat instead of f in the cost

  PicardControls picard() const { return {picard_tol, picard_maxit}; }

  bool operator==(const PgdConfig&) const = default;
};

/// Everything the reduced cost needs besides the control: the PDE data of
/// one experiment. The top boundary is theta_r + u; bottom and the initial
/// profile are fixed data.
struct ControlProblem {
  SoilModel soil;
  FeddesUptake uptake;
  DiffusivityRegularization reg;
  Grid1D grid;
  std::vector<double> ic;      // length Nz
  std::vector<double> bottom;  // length Nt
  double lambda = 0.1;
  bool track_normalized = false;
  PicardControls picard;

  BoundaryData boundary_for(const ControlSignal& u) const;
  StateField solve(const ControlSignal& u) const;
  AdmissibleSet admissible_set(double epsilon) const;
};

enum class ExitReason { Tolerance, MaxIterations, LineSearchStall };

std::string to_string(ExitReason reason);

struct OptimizationReport {
  int iterations = 0;
  std::vector<double> cost_history;  // J at each accepted iterate, non-increasing
  ControlSignal final_control;
  StateField final_state;
  AdjointField final_adjoint;
  ExitReason exit_reason = ExitReason::Tolerance;
  long clamp_events = 0;  // summed over every forward solve of the run
  double projected_gradient_norm_initial = 0.0;
  double projected_gradient_norm_final = 0.0;
  long reduced_cost_evals = 0;
};

/// J = 1/2 iint (f(theta) - 1)^2 dz dt + lambda/2 int u^2 dt, trapezoidal in
/// both directions on the solver grid.
double cost(const FeddesUptake& uptake, const SoilModel& soil, const StateField& theta,
            const ControlSignal& u, double lambda, bool track_normalized = false);

/// Forward solve followed by cost: the cost functional as a function of the
/// control alone.
double reduced_cost(const ControlProblem& problem, const ControlSignal& u);

/// grad[n] = lambda u[n] + boundary_flux[n]; the PGD descent direction is its
/// negation.
std::vector<double> gradient(const ControlSignal& u, double lambda,
                             std::span<const double> boundary_flux);

/// State-dependent part of the exact discrete cost gradient: one backward
/// sweep of multipliers through the transposed linearization of the forward
/// scheme (interface-mean diffusivities, upwind conductivity and the sink all
/// differentiated analytically). This is the discrete counterpart of the
/// surface multiplier beta dp/dz|_{z=0}; it matches central finite
/// differences of the reduced cost to solver precision, which the
/// discretized continuous adjoint does not on coarse grids. Entry 0 is zero:
/// the initial row is data.
std::vector<double> discrete_boundary_flux(const ControlProblem& problem,
                                           const ControlSignal& u, const StateField& theta);

/// Componentwise clamp onto the box. Idempotent, non-expansive in max-norm.
ControlSignal project(const ControlSignal& u, const AdmissibleSet& set);

struct LineSearchResult {
  double step = 0.0;
  double candidate_cost = 0.0;
  int evaluations = 0;
  long clamp_events = 0;
};

/// Golden-section search for argmin_s J(pr(u + s r)) over [0, s_max],
/// s_max = bracket_scale * (upper - lower) / max|r|. Returns the best
/// evaluated step; the candidate cost never exceeds current_cost. Throws
/// LineSearchStall if the evaluation budget is exhausted without finding an
/// improving step. r identically zero short-circuits to s = 0.
LineSearchResult line_search(const ControlProblem& problem, const ControlSignal& u,
                             std::span<const double> r, double current_cost,
                             const AdmissibleSet& set, const LineSearchConfig& config);

/// Projected gradient descent on the reduced cost, starting from u0. Each
/// iteration: forward solve, adjoint solve, descent direction
/// -(lambda u + p1), scalar step search, projection. Exits when the
/// candidate cost changes by less than tol, on the iteration cap, or on a
/// line-search stall.
OptimizationReport pgd(const ControlProblem& problem, const PgdConfig& config,
                       const ControlSignal& u0);

struct GradientCheckResult {
  std::vector<double> relative_errors;
  double max_relative_error = 0.0;
};

/// Adjoint-gradient vs central finite differences of the reduced cost, in
/// directional-derivative form, at an interior base control. Directions are
/// seeded uniform noise; the forward solves run at a tightened Picard
/// tolerance so the FD quotient is smooth at the given step.
GradientCheckResult gradient_check(const ControlProblem& problem, const PgdConfig& config,
                                   int num_directions = 5, double fd_step = 1e-5,
                                   std::uint32_t seed = 20240901u);

}  // namespace richards
