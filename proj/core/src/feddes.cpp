#include "richards/feddes.hpp"

#include <sstream>
#include <stdexcept>

namespace richards {

namespace {

void require_unsaturated(double h) {
  if (!(h <= 0.0)) {
    std::ostringstream os;
    os << "uptake_hat: pressure head " << h << " rejected (must be <= 0)";
    throw std::domain_error(os.str());
  }
}

void require_open_interval(const SoilModel& soil, double theta) {
  if (!(theta > soil.theta_r() && theta < soil.theta_S())) {
    std::ostringstream os;
    os << "uptake: water content " << theta << " outside (" << soil.theta_r() << ", "
       << soil.theta_S() << ")";
    throw std::domain_error(os.str());
  }
}

}  // namespace

double FeddesUptake::uptake_hat(double h) const {
  require_unsaturated(h);
  if (h >= h1) return 0.0;                  // wet cutoff [h1, 0]
  if (h > h2) return (h - h1) / (h2 - h1);  // wet ramp
  if (h >= h3) return 1.0;                  // plateau
  if (h > h4) return (h - h4) / (h3 - h4);  // dry ramp
  return 0.0;                               // dry cutoff
}

double FeddesUptake::uptake_hat_dh(double h) const {
  require_unsaturated(h);
  if (h >= h1) return 0.0;
  if (h >= h2) return 1.0 / (h2 - h1);
  if (h >= h3) return 0.0;
  if (h >= h4) return 1.0 / (h3 - h4);
  return 0.0;
}

std::vector<std::string> FeddesUptake::validate() const {
  std::vector<std::string> violations;
  if (!(h1 <= 0.0)) violations.push_back("uptake.h1 <= 0 violated");
  if (!(h4 < h3 && h3 < h2 && h2 < h1))
    violations.push_back("uptake breakpoints must satisfy h4 < h3 < h2 < h1");
  if (!(varphi >= 0.0)) violations.push_back("uptake.varphi >= 0 violated");
  return violations;
}

double uptake(const FeddesUptake& model, const SoilModel& soil, double theta) {
  require_open_interval(soil, theta);
  return model.varphi * model.uptake_hat(soil.pressure_head(theta));
}

double uptake_dtheta(const FeddesUptake& model, const SoilModel& soil, double theta) {
  require_open_interval(soil, theta);
  const double h = soil.pressure_head(theta);
  const double slope = model.uptake_hat_dh(h);
  if (slope == 0.0) return 0.0;
  return model.varphi * slope / soil.specific_capacity(h);
}

double adjoint_source(const FeddesUptake& model, const SoilModel& soil, double theta) {
  const double dfdtheta = uptake_dtheta(model, soil, theta);
  if (dfdtheta == 0.0) return 0.0;
  return (uptake(model, soil, theta) - 1.0) * dfdtheta;
}

double adjoint_source_normalized(const FeddesUptake& model, const SoilModel& soil, double theta) {
  require_open_interval(soil, theta);
  const double h = soil.pressure_head(theta);
  const double slope = model.uptake_hat_dh(h);
  if (slope == 0.0) return 0.0;
  return (model.uptake_hat(h) - 1.0) * slope / soil.specific_capacity(h);
}

}  // namespace richards
