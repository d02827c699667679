#pragma once

#include <string>
#include <vector>

#include "richards/feddes.hpp"
#include "richards/grid.hpp"
#include "richards/optim.hpp"
#include "richards/soil.hpp"

namespace richards {

/// Initial-profile shapes. Linear and Quadratic interpolate between the
/// surface value theta_r + u0 and the bottom boundary value at t = 0;
/// LinearReflected extrapolates with the negated slope (the form used by the
/// second built-in experiment). Table holds explicit (z, theta) pairs,
/// interpolated linearly onto the grid.
enum class IcKind { Linear, LinearReflected, Quadratic, Table };

struct IcSpec {
  IcKind kind = IcKind::Linear;
  std::vector<double> z;      // Table only, strictly increasing, spans [0, Z]
  std::vector<double> theta;  // Table only, same length as z

  bool operator==(const IcSpec&) const = default;
};

enum class BottomBcKind { Constant, LinearInTime };

struct BottomBcSpec {
  BottomBcKind kind = BottomBcKind::Constant;
  double start = 0.0;  // value at t = 0 (the only value for Constant)
  double end = 0.0;    // value at t = T (LinearInTime only)

  bool operator==(const BottomBcSpec&) const = default;
};

/// A full experiment description: soil, uptake model, grid, initial and
/// boundary data, initial control offset, and optimizer settings.
struct Scenario {
  std::string name;
  SoilModel soil{HaverkampSoil{}};
  FeddesUptake uptake;
  Grid1D grid;
  IcSpec ic;
  BottomBcSpec bc_bottom;
  double bc_top_offset_init = 0.0;  // constant u0
  PgdConfig pgd;

  /// Initial profile sampled at the grid nodes (not yet clamped).
  std::vector<double> initial_profile() const;
  /// Bottom Dirichlet series at the grid time levels.
  std::vector<double> bottom_series() const;
  ControlSignal initial_control() const;
  ControlProblem problem() const;

  /// Every violated invariant, one message each; empty means valid.
  std::vector<std::string> validate() const;

  bool operator==(const Scenario&) const = default;
};

std::vector<std::string> builtin_scenario_names();

/// The four built-in experiments: haverkamp-ex1, haverkamp-ex2, berino-ex3,
/// glendale-ex4. Throws UnknownScenario otherwise.
Scenario builtin_scenario(const std::string& name);

/// Parse a JSON scenario document. Throws SchemaError on unknown/missing
/// keys or wrong types, ValidationError (listing every violated field) on
/// invariant breaches.
Scenario parse_scenario(const std::string& json_text);

/// Serialize so that parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

}  // namespace richards
