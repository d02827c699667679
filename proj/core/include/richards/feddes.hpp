#pragma once

#include <string>
#include <vector>

#include "richards/soil.hpp"

namespace richards {

/// Piecewise-linear root-water-uptake model in pressure head:
/// zero on [h1, 0] and below h4, full uptake on the plateau [h3, h2],
/// linear ramps in between, all scaled by varphi.
///
/// Breakpoints are in cm with h4 < h3 < h2 < h1 <= 0. The model is a pure
/// function of h; no depth dependence (varphi already carries the 1/Z
/// scaling used by the built-in scenarios).
struct FeddesUptake {
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
  double h4 = 0.0;
  double varphi = 0.0;  // scaling factor, > 0 (or 0 to disable the sink)

  /// Normalized shape f_hat(h) in [0, 1]. Requires h <= 0.
  double uptake_hat(double h) const;

  /// d f_hat / d h. Discontinuous at the breakpoints; this returns the
  /// right-limit (wetter-side) value there.
  double uptake_hat_dh(double h) const;

  std::vector<std::string> validate() const;

  bool operator==(const FeddesUptake&) const = default;
};

/// Sink rate f(theta) = varphi * f_hat(h(theta)). Requires
/// theta_r < theta < theta_S.
double uptake(const FeddesUptake& model, const SoilModel& soil, double theta);

/// Chain rule df/dtheta = varphi * f_hat'(h) / C(h) at h = h(theta). Zero on
/// the plateau and cutoff regions, negative on the wet ramp, positive on the
/// dry ramp.
double uptake_dtheta(const FeddesUptake& model, const SoilModel& soil, double theta);

/// Adjoint source F(theta) = (f(theta) - 1) * df/dtheta(theta).
double adjoint_source(const FeddesUptake& model, const SoilModel& soil, double theta);

/// Variant of the adjoint source for the normalized tracking target:
/// (f_hat(theta) - 1) * df_hat/dtheta(theta).
double adjoint_source_normalized(const FeddesUptake& model, const SoilModel& soil, double theta);

}  // namespace richards
