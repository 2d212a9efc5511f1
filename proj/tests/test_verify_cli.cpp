#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "reeb/dynamics.hpp"
#include "reeb/errors.hpp"
#include "reeb/scenario.hpp"
#include "reeb/verify.hpp"

using namespace reeb;

namespace {

VerifyPlan quick_plan() {
  VerifyPlan p;
  p.samples_h4 = 500;
  p.samples_h3 = 2000;
  p.samples_reeb = 500;
  p.samples_grad = 100;
  p.samples_dq = 200;
  p.samples_profile = 1000;
  p.samples_shell = 200;
  p.drift_T = 20.0;
  return p;
}

}  // namespace

TEST_CASE("scenario json round trip") {
  auto sc = default_scenario();
  auto j = scenario_to_json(sc);
  auto back = scenario_from_json(j);
  CHECK(back.n == sc.n);
  CHECK(back.C == sc.C);
  CHECK(back.lambda == sc.lambda);
  CHECK(back.b.has_value() == sc.b.has_value());
  CHECK(scenario_hash(back) == scenario_hash(sc));
  // hash is sensitive to the parameters
  auto tweaked = sc;
  tweaked.lambda = 1.4;
  CHECK(scenario_hash(tweaked) != scenario_hash(sc));
}

TEST_CASE("scenario validation") {
  auto sc = default_scenario();
  sc.C = 0.8;
  CHECK_THROWS_AS(sc.validate(), ConstraintViolation);
  sc = default_scenario();
  sc.lambda = 2.5;  // >= e^C
  CHECK_THROWS_AS(sc.validate(), ConstraintViolation);
  sc = default_scenario();
  sc.lambda = 1.0;
  CHECK_THROWS_AS(sc.validate(), ConstraintViolation);
  CHECK_NOTHROW(default_scenario().validate());
}

TEST_CASE("build_model resolves b and matches the explicit choice") {
  auto sc = default_scenario();
  auto bm_auto = build_model(sc);
  CHECK(bm_auto.b_certificates.b == doctest::Approx(4.0));
  CHECK(bm_auto.bounds.z_max == doctest::Approx(std::sqrt(2.55)).epsilon(1e-9));

  auto sc4 = sc;
  sc4.b = 4.0;
  auto bm4 = build_model(sc4);
  CHECK(model_to_json(bm_auto).dump() == model_to_json(bm4).dump());

  auto bad = sc;
  bad.b = 1.0;  // fails the margin certificate
  CHECK_THROWS_AS(build_model(bad), ConstraintViolation);
}

TEST_CASE("load_scenario reads what scenario_to_json writes") {
  auto sc = default_scenario();
  const std::string path = "/tmp/reeb_test_scenario.json";
  write_file_atomic(path, scenario_to_json(sc).dump(2));
  auto back = load_scenario(path);
  CHECK(scenario_hash(back) == scenario_hash(sc));
  std::remove(path.c_str());
  CHECK_THROWS(load_scenario("/tmp/definitely_missing_scenario.json"));
}

TEST_CASE("orbit csv round trips the stored states") {
  auto bm = build_model(default_scenario());
  IntegratorConfig cfg;
  auto x0 = PhasePoint::from_polar(std::vector<double>{1.2, 0.9},
                                   std::vector<double>{0.3, 1.1}, -0.2);
  auto tr = integrate(bm.model, x0, 1.0, cfg);
  const std::string csv = orbit_csv(tr, bm.model);

  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x1,y1,x2,y2,z,r1,r2,H,dzrate");
  std::size_t row = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 10);
    CHECK(vals[0] == tr.times[row]);  // 17 digits reproduce doubles exactly
    for (int c = 0; c < 5; ++c) CHECK(vals[1 + c] == tr.states[row].coords[c]);
    ++row;
  }
  CHECK(row == tr.states.size());
}

TEST_CASE("fd gradient oracle") {
  auto quad = [](const PhasePoint& p) {
    double s = 0.0;
    for (double c : p.coords) s += c * c;
    return s;
  };
  PhasePoint p(std::vector<double>{0.7, -0.2, 1.1, 0.4, 0.3});
  auto g = fd_gradient_oracle(quad, p, 1e-5);
  for (int c = 0; c < 5; ++c)
    CHECK(g[c] == doctest::Approx(2 * p.coords[c]).epsilon(1e-9));

  auto constant = [](const PhasePoint&) { return 3.0; };
  auto gz = fd_gradient_oracle(constant, p, 1e-5);
  for (int c = 0; c < 5; ++c) CHECK(gz[c] == 0.0);
}

TEST_CASE("run_suite passes the default scenario") {
  auto report = run_suite(default_scenario(), 42, quick_plan());
  CHECK(report.pass);
  CHECK(report.seed == 42);
  for (const auto& chk : report.checks) {
    INFO(chk.name);
    CHECK(chk.pass);
    CHECK_FALSE(chk.anchor.empty());
  }
}

TEST_CASE("run_suite records a lemma failure for b = 1") {
  auto sc = default_scenario();
  sc.b = 1.0;
  auto report = run_suite(sc, 42, quick_plan());
  CHECK_FALSE(report.pass);
  bool lemma_failed = false;
  for (const auto& chk : report.checks)
    if (!chk.pass && chk.name.find("L-margin") != std::string::npos) lemma_failed = true;
  CHECK(lemma_failed);
}

TEST_CASE("run_suite rejects constraint violations up front") {
  auto sc = default_scenario();
  sc.lambda = 2.5;
  CHECK_THROWS_AS(run_suite(sc, 0, quick_plan()), ConstraintViolation);
}

TEST_CASE("reports are deterministic given the seed") {
  auto plan = quick_plan();
  plan.threads = 4;
  const std::string a = run_suite(default_scenario(), 7, plan).to_json().dump();
  plan.threads = 1;  // sharding must not change the values
  const std::string b = run_suite(default_scenario(), 7, plan).to_json().dump();
  CHECK(a == b);
  const std::string c = run_suite(default_scenario(), 8, plan).to_json().dump();
  CHECK(a != c);
}
