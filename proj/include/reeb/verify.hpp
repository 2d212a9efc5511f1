#ifndef REEB_VERIFY_HPP
#define REEB_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reeb/scenario.hpp"

namespace reeb {

struct CheckRecord {
  std::string name;
  std::string anchor;  // condition tag ((H1)..(H4), (X1)..(X4), ...) or "invented"
  std::uint64_t samples = 0;
  double worst = 0.0;  // worst margin or residual, sign convention per check
  std::vector<double> witness;
  bool pass = false;
};

struct VerificationReport {
  std::uint64_t scenario_hash = 0;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  bool pass = false;

  nlohmann::json to_json() const;
};

// Sample counts and thresholds, centralized and overridable per run.
struct VerifyPlan {
  std::uint64_t samples_h4 = 10000;
  std::uint64_t samples_h3 = 100000;
  std::uint64_t samples_reeb = 10000;
  std::uint64_t samples_grad = 1000;
  std::uint64_t samples_dq = 1000;
  std::uint64_t samples_profile = 10000;
  std::uint64_t samples_shell = 1000;
  double eps_invariant = 0.05;  // strictness is certified beyond this distance
  double tol_h4 = 1e-9;
  double tol_grad_rel = 1e-6;
  double tol_alpha = 1e-9;
  double tol_dalpha = 1e-8;
  double tol_dq_rel = 1e-10;
  double tol_shell = 1e-12;
  double tol_g3 = 1e-12;
  double drift_T = 100.0;
  double tol_drift = 1e-6;
  int threads = 0;  // 0 = hardware concurrency
};

// Runs every certificate in a fixed order and assembles the report.
// Throws ConstraintViolation if the scenario fails the pre-stage checks;
// individual check failures are recorded with pass=false instead.
VerificationReport run_suite(const ScenarioConfig& sc, std::uint64_t seed,
                             const VerifyPlan& plan = {});

// Central finite differences of a scalar field on R^{2n+1}.
std::vector<double> fd_gradient_oracle(
    const std::function<double(const PhasePoint&)>& field, const PhasePoint& p,
    double step);

}  // namespace reeb

#endif
