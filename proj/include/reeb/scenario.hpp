#ifndef REEB_SCENARIO_HPP
#define REEB_SCENARIO_HPP

#include <optional>
#include <string>

#include "reeb/dynamics.hpp"
#include "reeb/hamiltonian.hpp"
#include "reeb/ode.hpp"
#include "reeb/quadratic_core.hpp"
#include "reeb/torus_flows.hpp"

#include <nlohmann/json_fwd.hpp>

namespace reeb {

// Everything needed to build a model reproducibly.
struct ScenarioConfig {
  int n = 2;
  double C = 0.7;
  double lambda = 1.5;
  std::optional<double> b;  // nullopt = "auto" (doubling search)
  TorusVectorField V;
  InvariantSetSpec invariant_set;
  IntegratorConfig integrator;
  std::uint64_t seed = 0;

  // Throws ConstraintViolation on invalid parameters.
  void validate() const;
};

ScenarioConfig default_scenario();  // n=2, nu=(1, sqrt 2), C=0.7, lambda=1.5, full torus

ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& sc);
ScenarioConfig load_scenario(const std::string& path);

struct BuiltModel {
  HamiltonianModel model;
  ScenarioConfig scenario;
  BSearchResult b_certificates;
  SupportBounds bounds;
};

// Resolves b (search or explicit with certificate recomputation), builds mu
// and the profiles, and verifies the support shell.
BuiltModel build_model(const ScenarioConfig& sc);

// Full model dump (scalars, TrigPoly tables, G ramp parameter, bounds);
// floats carry 17 significant digits.
nlohmann::json model_to_json(const BuiltModel& bm);

// FNV-1a over the canonical scenario dump.
std::uint64_t scenario_hash(const ScenarioConfig& sc);

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

// Orbit CSV: t,x1,y1,...,xn,yn,z,r1,...,rn,H,dzrate with 17 digits.
std::string orbit_csv(const OrbitTrace& trace, const HamiltonianModel& m);

}  // namespace reeb

#endif
