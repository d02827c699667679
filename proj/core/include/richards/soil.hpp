#pragma once

#include <string>
#include <variant>
#include <vector>

namespace richards {

/// Haverkamp retention/conductivity parameter set (cm, hours):
///   theta(h) = theta_r + alpha (theta_S - theta_r) / (alpha + |h|^beta2)
///   K(h)     = K_S A / (A + |h|^beta1)
/// Quasi-unsaturated admissibility (diffusivity blows up at saturation)
/// requires beta2 > 1.
struct HaverkampSoil {
  double theta_r = 0.0;
  double theta_S = 0.0;
  double alpha = 0.0;  // retention shape, cm^beta2 scale
  double beta2 = 0.0;  // retention exponent
  double A = 0.0;      // conductivity shape, cm^beta1 scale
  double beta1 = 0.0;  // conductivity exponent
  double K_S = 0.0;    // saturated conductivity, cm/h

  bool operator==(const HaverkampSoil&) const = default;
};

/// Van Genuchten-Mualem parameter set. m = 1 - 1/n is held exactly and is
/// never stored. Admissibility requires n > 1.
struct VanGenuchtenSoil {
  double theta_r = 0.0;
  double theta_S = 0.0;
  double alpha = 0.0;  // inverse air-entry, 1/cm
  double n = 0.0;      // pore-size exponent
  double K_S = 0.0;    // saturated conductivity, cm/h

  double m() const { return 1.0 - 1.0 / n; }

  bool operator==(const VanGenuchtenSoil&) const = default;
};

struct ValidityReport {
  bool valid = true;
  std::vector<std::string> violations;
};

/// One soil, either family. Immutable after construction; every member is a
/// pure function, safe for concurrent use.
///
/// Pressure head h is in cm and non-positive (unsaturated regime only);
/// water content theta lives in [theta_r, theta_S]. Functions defined on the
/// open interval reject out-of-range arguments; solver inner loops go through
/// clamp_theta() first, which pulls the argument a hair inside both ends.
class SoilModel {
 public:
  explicit SoilModel(HaverkampSoil s) : soil_(s) {}
  explicit SoilModel(VanGenuchtenSoil s) : soil_(s) {}

  double theta_r() const;
  double theta_S() const;
  double saturated_conductivity() const;

  /// Retention curve theta(h). Requires h <= 0; equals theta_S iff h = 0.
  double water_content(double h) const;

  /// Closed-form inverse of the retention curve. Requires
  /// theta_r < theta < theta_S (singular at both ends); result is < 0.
  double pressure_head(double theta) const;

  /// K(h). Requires h <= 0; equals K_S at h = 0.
  double hydraulic_conductivity(double h) const;

  /// Specific water capacity C(h) = d theta / d h, analytic. Requires h < 0
  /// (degenerates at h = 0).
  double specific_capacity(double h) const;

  /// K as a function of water content, K(h(theta)).
  double conductivity_of_theta(double theta) const;

  /// Water diffusivity beta(theta) = K(h)/C(h) at h = h(theta). Diverges as
  /// theta -> theta_S for admissible parameter sets.
  double diffusivity(double theta) const;

  /// dK/d theta = K'(h)/C(h) at h = h(theta): the advection coefficient of
  /// the adjoint equation. Non-negative.
  double dK_dtheta(double theta) const;

  /// dC/dh, analytic.
  double specific_capacity_dh(double h) const;

  /// d beta / d theta = (K'(h) C - K C'(h)) / C^3 at h = h(theta): the exact
  /// linearization of the theta-form flux, used by the discrete adjoint.
  double dbeta_dtheta(double theta) const;

  /// Clamp to [theta_r + margin, theta_S - margin] for solver-side
  /// evaluation. Public entry points stay strict; this is for inner loops
  /// that may overshoot transiently.
  double clamp_theta(double theta) const;

  /// Checks the family-specific exponent condition (beta2 > 1 resp. n > 1)
  /// plus positivity/ordering of all parameters. Reports every violation,
  /// never throws.
  ValidityReport validate_quasi_unsaturated() const;

  bool is_haverkamp() const { return std::holds_alternative<HaverkampSoil>(soil_); }
  const HaverkampSoil* haverkamp() const { return std::get_if<HaverkampSoil>(&soil_); }
  const VanGenuchtenSoil* van_genuchten() const { return std::get_if<VanGenuchtenSoil>(&soil_); }

  bool operator==(const SoilModel&) const = default;

 private:
  std::variant<HaverkampSoil, VanGenuchtenSoil> soil_;
};

/// Truncation margin for the regularized diffusivity.
struct DiffusivityRegularization {
  double epsilon = 1e-3;  // water-content units, 0 < epsilon < theta_S - theta_r

  bool operator==(const DiffusivityRegularization&) const = default;
};

/// Truncated diffusivity: equals beta(theta) below theta_S - epsilon and
/// stays flat at beta(theta_S - epsilon) above it. Requires theta > theta_r;
/// arguments above theta_S are permitted (flat branch).
double diffusivity_regularized(const SoilModel& soil,
                               const DiffusivityRegularization& reg,
                               double theta);

/// Derivative of the truncated diffusivity: dbeta/dtheta below the junction,
/// zero on the flat branch.
double dbeta_regularized_dtheta(const SoilModel& soil,
                                const DiffusivityRegularization& reg,
                                double theta);

}  // namespace richards
