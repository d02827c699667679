#pragma once

#include <stdexcept>
#include <string>

namespace richards {

/// Scenario or parameter set violates a model invariant. The message lists
/// every violated field, one per line.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural defect in a config document: unknown key, missing key, or a
/// value of the wrong type.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Boundary series leaves the admissible water-content range.
class InvalidBoundary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inner Picard iteration of the forward solver exceeded its iteration cap
/// without meeting the update tolerance.
class PicardDivergence : public std::runtime_error {
 public:
  PicardDivergence(int time_level, double residual, const std::string& what)
      : std::runtime_error(what), time_level_(time_level), residual_(residual) {}

  int time_level() const { return time_level_; }
  double residual() const { return residual_; }

 private:
  int time_level_;
  double residual_;
};

/// Step-size search exhausted its evaluation budget without finding an
/// improving step.
class LineSearchStall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace richards
