#include "richards/soil.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace richards {

namespace {

constexpr double kThetaMargin = 1e-12;

[[noreturn]] void reject(const char* fn, double value, const char* why) {
  std::ostringstream os;
  os << fn << ": argument " << value << " rejected (" << why << ")";
  throw std::domain_error(os.str());
}

void require_nonpositive_head(const char* fn, double h) {
  if (!(h <= 0.0)) reject(fn, h, "pressure head must be <= 0 in the unsaturated model");
}

// phi(h) = 1/(1 + |alpha h|^n), the saturation fraction of the VG retention
// curve. Named to avoid collision with the Feddes scaling factor.
double vg_saturation_fraction(const VanGenuchtenSoil& s, double h) {
  return 1.0 / (1.0 + std::pow(std::fabs(s.alpha * h), s.n));
}

// 1 - (1 - phi)^m without cancellation when phi is tiny (dry end)
double vg_mualem_bracket(double phi, double m) {
  return -std::expm1(m * std::log1p(-phi));
}

}  // namespace

double SoilModel::theta_r() const {
  return std::visit([](const auto& s) { return s.theta_r; }, soil_);
}

double SoilModel::theta_S() const {
  return std::visit([](const auto& s) { return s.theta_S; }, soil_);
}

double SoilModel::saturated_conductivity() const {
  return std::visit([](const auto& s) { return s.K_S; }, soil_);
}

double SoilModel::clamp_theta(double theta) const {
  return std::clamp(theta, theta_r() + kThetaMargin, theta_S() - kThetaMargin);
}

double SoilModel::water_content(double h) const {
  require_nonpositive_head("water_content", h);
  if (const auto* s = haverkamp()) {
    return s->theta_r +
           s->alpha * (s->theta_S - s->theta_r) / (s->alpha + std::pow(std::fabs(h), s->beta2));
  }
  const auto& s = *van_genuchten();
  return s.theta_r + (s.theta_S - s.theta_r) * std::pow(vg_saturation_fraction(s, h), s.m());
}

double SoilModel::pressure_head(double theta) const {
  if (!(theta > theta_r() && theta < theta_S()))
    reject("pressure_head", theta, "inverse retention is singular at and outside [theta_r, theta_S]");
  if (const auto* s = haverkamp()) {
    // |h|^beta2 = alpha (theta_S - theta) / (theta - theta_r), cancellation-free
    const double x = s->alpha * (s->theta_S - theta) / (theta - s->theta_r);
    return -std::pow(x, 1.0 / s->beta2);
  }
  const auto& s = *van_genuchten();
  const double se = (theta - s.theta_r) / (s.theta_S - s.theta_r);
  // |alpha h|^n = Se^{-1/m} - 1, evaluated via expm1 to survive Se -> 1
  const double w = std::expm1(-std::log(se) / s.m());
  return -std::pow(w, 1.0 / s.n) / s.alpha;
}

double SoilModel::hydraulic_conductivity(double h) const {
  require_nonpositive_head("hydraulic_conductivity", h);
  if (const auto* s = haverkamp()) {
    return s->K_S * s->A / (s->A + std::pow(std::fabs(h), s->beta1));
  }
  const auto& s = *van_genuchten();
  const double m = s.m();
  const double phi = vg_saturation_fraction(s, h);
  const double g = vg_mualem_bracket(phi, m);
  return s.K_S * std::pow(phi, 0.5 * m) * g * g;
}

double SoilModel::specific_capacity(double h) const {
  if (!(h < 0.0)) reject("specific_capacity", h, "d theta/d h degenerates at h = 0");
  const double x = std::fabs(h);
  if (const auto* s = haverkamp()) {
    const double denom = s->alpha + std::pow(x, s->beta2);
    return s->alpha * (s->theta_S - s->theta_r) * s->beta2 * std::pow(x, s->beta2 - 1.0) /
           (denom * denom);
  }
  const auto& s = *van_genuchten();
  const double m = s.m();
  const double phi = vg_saturation_fraction(s, h);
  return (s.theta_S - s.theta_r) * m * s.n * std::pow(s.alpha, s.n) * std::pow(x, s.n - 1.0) *
         std::pow(phi, m + 1.0);
}

double SoilModel::conductivity_of_theta(double theta) const {
  return hydraulic_conductivity(pressure_head(theta));
}

double SoilModel::diffusivity(double theta) const {
  if (!(theta > theta_r() && theta < theta_S()))
    reject("diffusivity", theta, "defined on the open interval (theta_r, theta_S)");
  const double h = pressure_head(theta);
  return hydraulic_conductivity(h) / specific_capacity(h);
}

double SoilModel::dK_dtheta(double theta) const {
  if (!(theta > theta_r() && theta < theta_S()))
    reject("dK_dtheta", theta, "defined on the open interval (theta_r, theta_S)");
  const double h = pressure_head(theta);
  const double x = std::fabs(h);
  double dK_dh;
  if (const auto* hv = haverkamp()) {
    const double denom = hv->A + std::pow(x, hv->beta1);
    dK_dh = hv->K_S * hv->A * hv->beta1 * std::pow(x, hv->beta1 - 1.0) / (denom * denom);
  } else {
    const auto& s = *van_genuchten();
    const double m = s.m();
    const double phi = vg_saturation_fraction(s, h);
    const double g = vg_mualem_bracket(phi, m);
    // dK/dphi, then dphi/dh = n alpha (alpha|h|)^{n-1} phi^2 (> 0 for h < 0)
    const double dK_dphi =
        s.K_S * (0.5 * m * std::pow(phi, 0.5 * m - 1.0) * g * g +
                 2.0 * m * std::pow(phi, 0.5 * m) * g * std::pow(1.0 - phi, m - 1.0));
    const double dphi_dh = s.n * s.alpha * std::pow(s.alpha * x, s.n - 1.0) * phi * phi;
    dK_dh = dK_dphi * dphi_dh;
  }
  return dK_dh / specific_capacity(h);
}

double SoilModel::specific_capacity_dh(double h) const {
  if (!(h < 0.0)) reject("specific_capacity_dh", h, "requires h < 0");
  const double x = std::fabs(h);
  double dlog_dx;  // C'(x)/C(x) with x = |h|
  if (const auto* hv = haverkamp()) {
    dlog_dx = (hv->beta2 - 1.0) / x -
              2.0 * hv->beta2 * std::pow(x, hv->beta2 - 1.0) / (hv->alpha + std::pow(x, hv->beta2));
  } else {
    const auto& s = *van_genuchten();
    const double m = s.m();
    const double phi = vg_saturation_fraction(s, h);
    dlog_dx = (s.n - 1.0) / x -
              (m + 1.0) * s.n * s.alpha * std::pow(s.alpha * x, s.n - 1.0) * phi;
  }
  // dC/dh = -dC/dx for h < 0
  return -specific_capacity(h) * dlog_dx;
}

double SoilModel::dbeta_dtheta(double theta) const {
  if (!(theta > theta_r() && theta < theta_S()))
    reject("dbeta_dtheta", theta, "defined on the open interval (theta_r, theta_S)");
  const double h = pressure_head(theta);
  const double C = specific_capacity(h);
  const double K = hydraulic_conductivity(h);
  const double dK_dh = dK_dtheta(theta) * C;  // dK/dtheta = K'(h)/C
  const double dC_dh = specific_capacity_dh(h);
  return (dK_dh * C - K * dC_dh) / (C * C * C);
}

ValidityReport SoilModel::validate_quasi_unsaturated() const {
  ValidityReport report;
  auto fail = [&report](const std::string& msg) {
    report.valid = false;
    report.violations.push_back(msg);
  };

  const auto check_common = [&](double theta_r, double theta_S, double alpha, double K_S) {
    if (!(theta_r >= 0.0)) fail("theta_r >= 0 violated");
    if (!(theta_r < theta_S)) fail("theta_r < theta_S violated");
    if (!(theta_S < 1.0)) fail("theta_S < 1 violated");
    if (!(alpha > 0.0)) fail("alpha > 0 violated");
    if (!(K_S > 0.0)) fail("K_S > 0 violated");
  };

  if (const auto* hv = haverkamp()) {
    check_common(hv->theta_r, hv->theta_S, hv->alpha, hv->K_S);
    if (!(hv->A > 0.0)) fail("A > 0 violated");
    if (!(hv->beta1 > 0.0)) fail("beta1 > 0 violated");
    if (!(hv->beta2 > 1.0)) fail("quasi-unsaturated admissibility requires beta2 > 1");
  } else {
    const auto& s = *van_genuchten();
    check_common(s.theta_r, s.theta_S, s.alpha, s.K_S);
    if (!(s.n > 1.0)) fail("quasi-unsaturated admissibility requires n > 1");
  }
  return report;
}

double diffusivity_regularized(const SoilModel& soil, const DiffusivityRegularization& reg,
                               double theta) {
  if (!(theta > soil.theta_r()))
    reject("diffusivity_regularized", theta, "requires theta > theta_r");
  const double cap = soil.theta_S() - reg.epsilon;
  return soil.diffusivity(std::min(theta, cap));
}

double dbeta_regularized_dtheta(const SoilModel& soil, const DiffusivityRegularization& reg,
                                double theta) {
  if (!(theta > soil.theta_r()))
    reject("dbeta_regularized_dtheta", theta, "requires theta > theta_r");
  if (theta > soil.theta_S() - reg.epsilon) return 0.0;  // flat branch
  return soil.dbeta_dtheta(theta);
}

}  // namespace richards
