#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "richards/scenario.hpp"
#include "richards/soil.hpp"

namespace testing {

inline richards::HaverkampSoil celia_sand() {
  return {0.075, 0.287, 1.611e6, 3.96, 1.175e6, 4.74, 34.0};
}

inline richards::VanGenuchtenSoil berino_sand() {
  return {0.0286, 0.3658, 0.0280, 2.2390, 22.5416};
}

inline richards::VanGenuchtenSoil glendale_loam() {
  return {0.1060, 0.4686, 0.0104, 1.3954, 0.5458};
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

// deterministic sample of theta values strictly inside (lo, hi)
inline std::vector<double> theta_samples(double lo, double hi, int count, unsigned seed = 42) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(lo, hi);
  std::vector<double> out(count);
  for (double& v : out) v = uni(rng);
  return out;
}

}  // namespace testing
