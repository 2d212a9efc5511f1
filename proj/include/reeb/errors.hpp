#ifndef REEB_ERRORS_HPP
#define REEB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace reeb {

struct TransversalityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvarianceViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MarginNegative : std::runtime_error {
  MarginNegative(const std::string& msg, std::vector<double> witness_pt)
      : std::runtime_error(msg), witness(std::move(witness_pt)) {}
  std::vector<double> witness;
};

struct SearchExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleRamp : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShellViolation : std::runtime_error {
  ShellViolation(const std::string& msg, std::vector<double> witness_pt)
      : std::runtime_error(msg), witness(std::move(witness_pt)) {}
  std::vector<double> witness;
};

struct ConstraintViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MonotonicityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoBracket : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace reeb

#endif
