#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <limits>
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "richards/soil.hpp"
#include "test_helpers.hpp"

using richards::DiffusivityRegularization;
using richards::SoilModel;
using richards::diffusivity_regularized;
using testing::rel_err;

namespace {

// independent closed-form diffusivity oracles, written directly from the
// retention/conductivity algebra (the library computes K(h)/C(h) instead)
double haverkamp_beta_closed_form(const richards::HaverkampSoil& s, double h) {
  const double x = std::fabs(h);
  const double num = s.K_S * s.A * std::pow(s.alpha + std::pow(x, s.beta2), 2.0);
  const double den = (s.A + std::pow(x, s.beta1)) * s.alpha * (s.theta_S - s.theta_r) * s.beta2 *
                     std::pow(x, s.beta2 - 1.0);
  return num / den;
}

double vg_beta_closed_form(const richards::VanGenuchtenSoil& s, double h) {
  const double m = s.m();
  const double x = std::fabs(h);
  const double phi = 1.0 / (1.0 + std::pow(s.alpha * x, s.n));
  const double num = s.K_S * std::pow(1.0 - std::pow(1.0 - phi, m), 2.0);
  const double den = m * s.n * std::pow(s.alpha, s.n) * (s.theta_S - s.theta_r) *
                     std::pow(x, s.n - 1.0) * std::pow(phi, 0.5 * m + 1.0);
  return num / den;
}

double centered_diff(const auto& fn, double x, double step) {
  return (fn(x + step) - fn(x - step)) / (2.0 * step);
}

}  // namespace

TEST_CASE("water content: saturation and residual limits") {
  const SoilModel soil{testing::celia_sand()};
  CHECK(soil.water_content(0.0) == doctest::Approx(0.287).epsilon(1e-14));
  CHECK(soil.water_content(-1e12) == doctest::Approx(0.075).epsilon(1e-6));
  CHECK_THROWS_AS((void)soil.water_content(1.0), std::domain_error);

  // increasing in h (down to heads where consecutive values are resolvable)
  double prev = 0.0;
  for (double h = -1e4; h < -0.05; h /= 1.25) {
    const double th = soil.water_content(h);
    CHECK(th > prev);
    prev = th;
  }
}

TEST_CASE("water content: Van Genuchten regression value") {
  const SoilModel soil{testing::berino_sand()};
  // frozen from a 50-digit evaluation of the closed form
  CHECK(rel_err(soil.water_content(-100.0), 0.11793318985120852201) < 1e-14);
  const SoilModel glendale{testing::glendale_loam()};
  CHECK(rel_err(glendale.water_content(-100.0), 0.40160685272784706675) < 1e-14);
}

TEST_CASE("pressure head: closed-form inverse round trips") {
  for (const SoilModel soil :
       {SoilModel{testing::celia_sand()}, SoilModel{testing::berino_sand()},
        SoilModel{testing::glendale_loam()}}) {
    CHECK(soil.pressure_head(soil.water_content(-50.0)) == doctest::Approx(-50.0).epsilon(1e-12));

    const double tr = soil.theta_r();
    const double tS = soil.theta_S();
    for (int k = 1; k < 1000; ++k) {
      const double theta = tr + 1e-6 + (tS - tr - 2e-6) * k / 1000.0;
      const double back = soil.water_content(soil.pressure_head(theta));
      CHECK(rel_err(back, theta) < 1e-10);
      CHECK(soil.pressure_head(theta) < 0.0);
    }
    CHECK_THROWS_AS((void)soil.pressure_head(tS), std::domain_error);
    CHECK_THROWS_AS((void)soil.pressure_head(tr), std::domain_error);
    CHECK_THROWS_AS((void)soil.pressure_head(tS + 0.1), std::domain_error);
  }
}

TEST_CASE("pressure head: Haverkamp midpoint against the explicit inverse") {
  const auto params = testing::celia_sand();
  const SoilModel soil{params};
  const double mid = 0.5 * (params.theta_r + params.theta_S);
  const double expect =
      -std::pow(params.alpha * (params.theta_S - params.theta_r) / (mid - params.theta_r) -
                    params.alpha,
                1.0 / params.beta2);
  CHECK(rel_err(soil.pressure_head(mid), expect) < 1e-12);
  CHECK(rel_err(soil.water_content(expect), mid) < 1e-12);
}

TEST_CASE("hydraulic conductivity: saturated values and decay") {
  const SoilModel sand{testing::celia_sand()};
  CHECK(sand.hydraulic_conductivity(0.0) == doctest::Approx(34.0).epsilon(1e-14));
  const SoilModel glendale{testing::glendale_loam()};
  CHECK(glendale.hydraulic_conductivity(0.0) == doctest::Approx(0.5458).epsilon(1e-14));

  // frozen regression: K_S * A / (A + 1000^4.74)
  CHECK(rel_err(sand.hydraulic_conductivity(-1000.0), 2.4072255293237215813e-7) < 1e-13);
  CHECK(rel_err(SoilModel{testing::berino_sand()}.hydraulic_conductivity(-100.0),
                0.030468453391910291933) < 1e-13);

  double prev = 0.0;
  for (double h = -1e4; h <= -0.05; h /= 1.2) {
    const double K = sand.hydraulic_conductivity(h);
    CHECK(K > prev);
    CHECK(K <= sand.saturated_conductivity());
    prev = K;
  }
  CHECK_THROWS_AS((void)sand.hydraulic_conductivity(0.5), std::domain_error);
}

TEST_CASE("specific capacity: analytic derivative matches finite differences") {
  for (const SoilModel soil :
       {SoilModel{testing::celia_sand()}, SoilModel{testing::berino_sand()},
        SoilModel{testing::glendale_loam()}}) {
    auto theta_of_h = [&](double h) { return soil.water_content(h); };
    for (double h : {-2.0, -5.0, -50.0, -200.0, -1500.0}) {
      const double fd = centered_diff(theta_of_h, h, 1e-4 * std::fabs(h));
      CHECK(rel_err(soil.specific_capacity(h), fd) < 1e-6);
    }
    CHECK_THROWS_AS((void)soil.specific_capacity(0.0), std::domain_error);
    CHECK_THROWS_AS((void)soil.specific_capacity(2.0), std::domain_error);
  }
}

TEST_CASE("specific capacity: Haverkamp closed form at h = -200") {
  const SoilModel soil{testing::celia_sand()};
  // frozen from the symbolic derivative alpha dtheta beta2 |h|^(b2-1)/(alpha+|h|^b2)^2
  CHECK(rel_err(soil.specific_capacity(-200.0), 5.2111967161488472206e-6) < 1e-13);
}

TEST_CASE("specific capacity: positive over the sampled head range") {
  for (const SoilModel soil :
       {SoilModel{testing::celia_sand()}, SoilModel{testing::berino_sand()}}) {
    for (double h = -1e4; h <= -1e-3; h /= 1.1) CHECK(soil.specific_capacity(h) > 0.0);
  }
}

TEST_CASE("diffusivity: dual route against the printed closed forms") {
  const auto sand = testing::celia_sand();
  const SoilModel soil{sand};
  const double theta = soil.water_content(-100.0);
  CHECK(rel_err(soil.diffusivity(theta), haverkamp_beta_closed_form(sand, -100.0)) < 1e-10);
  // frozen high-precision value of the closed form at h = -100
  CHECK(rel_err(soil.diffusivity(theta), 84.505243125237652687) < 1e-12);

  const auto berino = testing::berino_sand();
  const SoilModel vg{berino};
  const double theta_vg = vg.water_content(-100.0);
  CHECK(rel_err(vg.diffusivity(theta_vg), vg_beta_closed_form(berino, -100.0)) < 1e-10);
  CHECK(rel_err(vg.diffusivity(theta_vg), 30.272702062256062533) < 1e-12);
}

TEST_CASE("diffusivity * capacity = conductivity") {
  for (const SoilModel soil :
       {SoilModel{testing::celia_sand()}, SoilModel{testing::berino_sand()},
        SoilModel{testing::glendale_loam()}}) {
    // below h = -2 the retention curve still resolves theta_S - theta in
    // doubles; closer to saturation the identity degrades with the
    // representation, not the algebra
    for (double h = -3e3; h <= -2.0; h /= 1.15) {
      const double theta = soil.water_content(h);
      const double lhs = soil.diffusivity(theta) * soil.specific_capacity(h);
      CHECK(rel_err(lhs, soil.hydraulic_conductivity(h)) < 1e-10);
    }
  }
}

TEST_CASE("diffusivity: monotone on the wet range and divergent at saturation") {
  // Van Genuchten diffusivity is monotone over the whole open interval
  for (const SoilModel soil :
       {SoilModel{testing::berino_sand()}, SoilModel{testing::glendale_loam()}}) {
    const double tr = soil.theta_r(), tS = soil.theta_S();
    double prev = 0.0;
    for (int k = 1; k <= 500; ++k) {
      const double theta = tr + 1e-4 + (tS - tr - 2e-4) * k / 501.0;
      const double beta = soil.diffusivity(theta);
      CHECK(beta > prev);
      prev = beta;
    }
  }
  // The Haverkamp family with the Ex.1 exponents (beta2 + 1 > beta1) also
  // blows up at the dry end, with an interior minimum near theta_r + 0.006;
  // monotonicity holds from there up to saturation.
  const SoilModel sand{testing::celia_sand()};
  double prev = 0.0;
  for (int k = 0; k <= 500; ++k) {
    const double theta = 0.085 + (0.287 - 1e-4 - 0.085) * k / 500.0;
    const double beta = sand.diffusivity(theta);
    CHECK(beta > prev);
    prev = beta;
  }

  // divergence near saturation (n = 1.3954 family)
  const SoilModel glendale{testing::glendale_loam()};
  const double lo = glendale.diffusivity(glendale.theta_r() + 0.01);
  const double hi = glendale.diffusivity(glendale.theta_S() - 1e-6);
  CHECK(hi > 1e6 * lo);

  CHECK_THROWS_AS((void)sand.diffusivity(0.075), std::domain_error);
  CHECK_THROWS_AS((void)sand.diffusivity(0.3), std::domain_error);
}

TEST_CASE("regularized diffusivity: truncation branches and continuity") {
  const SoilModel soil{testing::celia_sand()};
  const DiffusivityRegularization reg{1e-3};
  const double tS = soil.theta_S();
  const double cap = soil.diffusivity(tS - reg.epsilon);

  CHECK(diffusivity_regularized(soil, reg, tS - 0.5 * reg.epsilon) == cap);
  CHECK(diffusivity_regularized(soil, reg, tS + 0.1) == cap);
  const double inside = tS - 2.0 * reg.epsilon;
  CHECK(diffusivity_regularized(soil, reg, inside) == soil.diffusivity(inside));

  // continuity across the junction: the jump shrinks with delta and vanishes
  double prev_jump = std::numeric_limits<double>::infinity();
  for (double delta : {1e-6, 1e-9, 1e-12}) {
    const double below = diffusivity_regularized(soil, reg, tS - reg.epsilon - delta);
    const double above = diffusivity_regularized(soil, reg, tS - reg.epsilon + delta);
    const double jump = std::fabs(above - below);
    CHECK(jump < prev_jump);
    prev_jump = jump;
  }
  CHECK(prev_jump / cap < 1e-8);

  // the cap is the supremum over theta
  double sup = 0.0;
  for (double theta : testing::theta_samples(soil.theta_r() + 1e-6, tS + 0.05, 2000))
    sup = std::max(sup, diffusivity_regularized(soil, reg, theta));
  CHECK(sup == cap);

  CHECK_THROWS_AS((void)diffusivity_regularized(soil, reg, soil.theta_r()), std::domain_error);
}

TEST_CASE("dK/dtheta: finite differences of K(theta), sign, residual limit") {
  for (const SoilModel soil :
       {SoilModel{testing::celia_sand()}, SoilModel{testing::berino_sand()},
        SoilModel{testing::glendale_loam()}}) {
    const double tr = soil.theta_r(), tS = soil.theta_S();
    auto K_of_theta = [&](double th) { return soil.conductivity_of_theta(th); };
    for (double theta : testing::theta_samples(tr + 0.05 * (tS - tr), tS - 0.02 * (tS - tr), 20)) {
      const double step = std::sqrt(2.2e-16) * std::max(std::fabs(theta), 0.1);
      const double fd = centered_diff(K_of_theta, theta, step);
      CHECK(rel_err(soil.dK_dtheta(theta), fd) < 1e-5);
      CHECK(soil.dK_dtheta(theta) >= 0.0);
    }
  }
  // conductivity is flat approaching the residual content for VG soils
  const SoilModel vg{testing::berino_sand()};
  CHECK(vg.dK_dtheta(vg.theta_r() + 1e-6) < 1e-10);
}

TEST_CASE("quasi-unsaturated admissibility gates") {
  CHECK(SoilModel{testing::celia_sand()}.validate_quasi_unsaturated().valid);
  CHECK(SoilModel{testing::berino_sand()}.validate_quasi_unsaturated().valid);
  CHECK(SoilModel{testing::glendale_loam()}.validate_quasi_unsaturated().valid);

  auto bad_vg = testing::berino_sand();
  bad_vg.n = 1.0;
  const auto report = SoilModel{bad_vg}.validate_quasi_unsaturated();
  CHECK_FALSE(report.valid);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].find("n > 1") != std::string::npos);

  auto bad_h = testing::celia_sand();
  bad_h.beta2 = 1.0;
  const auto report_h = SoilModel{bad_h}.validate_quasi_unsaturated();
  CHECK_FALSE(report_h.valid);
  CHECK(report_h.violations[0].find("beta2 > 1") != std::string::npos);

  auto bad_order = testing::celia_sand();
  bad_order.theta_r = 0.5;
  bad_order.theta_S = 0.2;
  CHECK_FALSE(SoilModel{bad_order}.validate_quasi_unsaturated().valid);
}
