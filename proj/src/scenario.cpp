#include "reeb/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reeb/errors.hpp"

namespace reeb {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json trig_poly_to_json(const TrigPoly& p) {
  json terms = json::array();
  for (const auto& t : p.terms())
    terms.push_back({{"m", t.m}, {"a", t.a}, {"s", t.s}});
  return terms;
}

TrigPoly trig_poly_from_json(int n, const json& j) {
  std::vector<TrigPoly::Term> terms;
  for (const auto& jt : j) {
    TrigPoly::Term t;
    t.m = jt.at("m").get<std::vector<std::int64_t>>();
    t.a = jt.value("a", 0.0);
    t.s = jt.value("s", 0.0);
    terms.push_back(std::move(t));
  }
  return TrigPoly(n, std::move(terms));
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n < 1) throw ConstraintViolation("n must be at least 1");
  if (!(C > 0.0 && C < 7.0 / 9.0)) throw ConstraintViolation("requires 0 < C < 7/9");
  if (!(lambda > 1.0 && lambda < std::exp(C)))
    throw ConstraintViolation("requires 1 < lambda < e^C");
  if (static_cast<int>(V.nu.size()) != n)
    throw ConstraintViolation("V must carry exactly n coefficient functions");
  if (b && *b <= 0.0) throw ConstraintViolation("explicit b must be positive");
  if (integrator.rtol <= 0.0 || integrator.atol <= 0.0)
    throw ConstraintViolation("integrator tolerances must be positive");
}

ScenarioConfig default_scenario() {
  ScenarioConfig sc;
  sc.n = 2;
  sc.C = 0.7;
  sc.lambda = 1.5;
  sc.V.nu = {TrigPoly::constant(2, 1.0), TrigPoly::constant(2, std::sqrt(2.0))};
  sc.invariant_set.kind = InvariantSetKind::FullTorus;
  sc.invariant_set.n = 2;
  return sc;
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig sc;
  sc.n = j.at("n").get<int>();
  sc.C = j.at("C").get<double>();
  sc.lambda = j.at("lambda").get<double>();
  if (j.contains("b") && !j["b"].is_string()) sc.b = j["b"].get<double>();

  for (const auto& nu_j : j.at("V").at("nu"))
    sc.V.nu.push_back(trig_poly_from_json(sc.n, nu_j));

  auto& is = sc.invariant_set;
  is.n = sc.n;
  if (j.contains("invariant_set")) {
    const auto& ji = j["invariant_set"];
    const std::string kind = ji.value("kind", "full_torus");
    if (kind == "full_torus") {
      is.kind = InvariantSetKind::FullTorus;
    } else if (kind == "sub_torus") {
      is.kind = InvariantSetKind::SubTorus;
      is.fixed_indices = ji.at("fixed_indices").get<std::vector<int>>();
      is.fixed_values = ji.at("fixed_values").get<std::vector<double>>();
    } else if (kind == "periodic_orbit") {
      is.kind = InvariantSetKind::PeriodicOrbit;
      is.theta0 = ji.at("theta0").get<std::vector<double>>();
      is.direction = ji.at("direction").get<std::vector<std::int64_t>>();
    } else if (kind == "custom") {
      is.kind = InvariantSetKind::Custom;
      is.cloud = ji.at("cloud").get<std::vector<std::vector<double>>>();
      is.custom_mu = trig_poly_from_json(sc.n, ji.at("mu"));
    } else {
      throw ConstraintViolation("unknown invariant_set kind: " + kind);
    }
  }

  if (j.contains("integrator")) {
    const auto& jc = j["integrator"];
    sc.integrator.rtol = jc.value("rtol", sc.integrator.rtol);
    sc.integrator.atol = jc.value("atol", sc.integrator.atol);
    sc.integrator.max_step = jc.value("max_step", sc.integrator.max_step);
    sc.integrator.max_steps = jc.value("max_steps", sc.integrator.max_steps);
  }
  sc.seed = j.value("seed", 0ull);
  return sc;
}

json scenario_to_json(const ScenarioConfig& sc) {
  json j;
  j["n"] = sc.n;
  j["C"] = sc.C;
  j["lambda"] = sc.lambda;
  if (sc.b)
    j["b"] = *sc.b;
  else
    j["b"] = "auto";
  json nus = json::array();
  for (const auto& nu : sc.V.nu) nus.push_back(trig_poly_to_json(nu));
  j["V"] = {{"nu", nus}};

  json ji;
  switch (sc.invariant_set.kind) {
    case InvariantSetKind::FullTorus:
      ji["kind"] = "full_torus";
      break;
    case InvariantSetKind::SubTorus:
      ji["kind"] = "sub_torus";
      ji["fixed_indices"] = sc.invariant_set.fixed_indices;
      ji["fixed_values"] = sc.invariant_set.fixed_values;
      break;
    case InvariantSetKind::PeriodicOrbit:
      ji["kind"] = "periodic_orbit";
      ji["theta0"] = sc.invariant_set.theta0;
      ji["direction"] = sc.invariant_set.direction;
      break;
    case InvariantSetKind::Custom:
      ji["kind"] = "custom";
      ji["cloud"] = sc.invariant_set.cloud;
      ji["mu"] = trig_poly_to_json(*sc.invariant_set.custom_mu);
      break;
  }
  j["invariant_set"] = ji;
  j["integrator"] = {{"rtol", sc.integrator.rtol},
                     {"atol", sc.integrator.atol},
                     {"max_step", sc.integrator.max_step},
                     {"max_steps", sc.integrator.max_steps}};
  j["seed"] = sc.seed;
  return j;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConstraintViolation("cannot open scenario file: " + path);
  json j;
  in >> j;
  return scenario_from_json(j);
}

BuiltModel build_model(const ScenarioConfig& sc) {
  sc.validate();
  NormalizedField k = normalize_field(sc.V, sc.lambda);
  TrigPoly mu = build_mu(sc.invariant_set);

  BSearchResult certs;
  if (sc.b) {
    // Explicit b: recompute both certificates rather than assuming them.
    certs.b = *sc.b;
    certs.eig_certificate = min_eig_over_torus(certs.b, k);
    if (certs.eig_certificate.min_eig <= 0.0)
      throw ConstraintViolation("explicit b fails the positive-definiteness certificate");
    certs.lemma_certificate = check_lemma_L(certs.b, sc.C, k);
    if (certs.lemma_certificate.margin <= 0.0)
      throw ConstraintViolation("explicit b fails the Q^b[2] > 1+C certificate (margin " +
                                std::to_string(certs.lemma_certificate.margin) + ")");
  } else {
    certs = find_b(sc.C, k);
    // The search uses a coarse theta grid; tighten the eigen certificate.
    certs.eig_certificate = min_eig_over_torus(certs.b, k);
  }

  HamiltonianModel model(std::move(k), std::move(mu), sc.C, certs.b,
                         certs.eig_certificate.min_eig);
  SupportBounds bounds = support_bounds(model);
  return BuiltModel{std::move(model), sc, std::move(certs), bounds};
}

json model_to_json(const BuiltModel& bm) {
  json j;
  // Canonical dump: record the resolved b so "auto" and the equivalent
  // explicit choice produce identical files.
  ScenarioConfig resolved = bm.scenario;
  resolved.b = bm.model.b();
  j["scenario"] = scenario_to_json(resolved);
  j["n"] = bm.model.dim();
  j["C"] = fmt17(bm.model.C());
  j["lambda"] = fmt17(bm.model.lambda());
  j["b"] = fmt17(bm.model.b());
  j["min_eig"] = fmt17(bm.model.min_eig());
  j["lemma_margin"] = fmt17(bm.b_certificates.lemma_certificate.margin);
  j["mu"] = trig_poly_to_json(bm.model.mu());
  j["G"] = {{"ramp_start", fmt17(bm.model.G().ramp_start())},
            {"ramp_width", fmt17(bm.model.G().ramp_width())},
            {"plateau_end", fmt17(bm.model.G().plateau_end())},
            {"identity_start", fmt17(bm.model.G().identity_start())}};
  j["support_bounds"] = {{"r_max", fmt17(bm.bounds.r_max)},
                         {"z_max", fmt17(bm.bounds.z_max)}};
  return j;
}

std::uint64_t scenario_hash(const ScenarioConfig& sc) {
  const std::string dump = scenario_to_json(sc).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (char c : dump) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
  }
  fs::rename(tmp, target);
}

std::string orbit_csv(const OrbitTrace& trace, const HamiltonianModel& m) {
  const int n = m.dim();
  std::ostringstream out;
  out << "t";
  for (int j = 1; j <= n; ++j) out << ",x" << j << ",y" << j;
  out << ",z";
  for (int j = 1; j <= n; ++j) out << ",r" << j;
  out << ",H,dzrate\n";
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    const PhasePoint& p = trace.states[i];
    out << fmt17(trace.times[i]);
    for (double c : p.coords) out << ',' << fmt17(c);
    for (int j = 0; j < n; ++j) out << ',' << fmt17(p.r(j));
    out << ',' << fmt17(eval_H(m, p)) << ',' << fmt17(h3_margin(m, p)) << '\n';
  }
  return out.str();
}

}  // namespace reeb
