// Command-line entry point: build models, verify the construction, integrate
// Reeb orbits, and search for a forward-trapped orbit.
//
// Exit codes: 0 pass, 1 verification failure, 2 configuration error,
// 3 search failure.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "reeb/errors.hpp"
#include "reeb/scenario.hpp"
#include "reeb/verify.hpp"

using namespace reeb;
using nlohmann::json;

namespace {

ScenarioConfig load_or_default(const std::string& path) {
  if (path.empty()) return default_scenario();
  return load_scenario(path);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

int cmd_build(const std::string& scenario_path, const std::string& out_path) {
  const ScenarioConfig sc = load_or_default(scenario_path);
  const BuiltModel bm = build_model(sc);
  const std::string dump = model_to_json(bm).dump(2) + "\n";
  if (out_path.empty())
    std::cout << dump;
  else
    write_file_atomic(out_path, dump);
  std::cerr << "model built: b=" << bm.model.b() << " r_max=" << bm.bounds.r_max
            << " z_max=" << bm.bounds.z_max << "\n";
  return 0;
}

int cmd_verify(const std::string& scenario_path, const std::string& report_path,
               std::uint64_t seed, int samples, int threads) {
  const ScenarioConfig sc = load_or_default(scenario_path);
  VerifyPlan plan;
  plan.threads = threads;
  if (samples > 0) {
    plan.samples_h4 = plan.samples_reeb = samples;
    plan.samples_h3 = 10ull * samples;
    plan.samples_grad = plan.samples_dq = std::max(1, samples / 10);
  }
  const VerificationReport report = run_suite(sc, seed, plan);
  const std::string dump = report.to_json().dump(2) + "\n";
  if (report_path.empty())
    std::cout << dump;
  else
    write_file_atomic(report_path, dump);
  for (const auto& c : report.checks)
    std::cerr << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  worst=" << c.worst
              << "\n";
  return report.pass ? 0 : 1;
}

int cmd_integrate(const std::string& scenario_path, const std::string& x0_str,
                  const std::string& torus_str, double T, double rtol, double atol,
                  const std::string& out_path) {
  ScenarioConfig sc = load_or_default(scenario_path);
  if (rtol > 0) sc.integrator.rtol = rtol;
  if (atol > 0) sc.integrator.atol = atol;
  const BuiltModel bm = build_model(sc);

  PhasePoint x0;
  if (!torus_str.empty()) {
    const auto th = parse_list(torus_str);
    if (static_cast<int>(th.size()) != sc.n)
      throw ConstraintViolation("--on-torus expects n angles");
    x0 = PhasePoint::from_polar(std::vector<double>(sc.n, 1.0), th, 0.0);
  } else {
    auto c = parse_list(x0_str);
    if (static_cast<int>(c.size()) != 2 * sc.n + 1)
      throw ConstraintViolation("--x0 expects 2n+1 coordinates");
    x0 = PhasePoint(std::move(c));
  }

  const OrbitTrace tr = integrate(bm.model, x0, T, sc.integrator);
  const std::string csv = orbit_csv(tr, bm.model);
  if (out_path.empty())
    std::cout << csv;
  else
    write_file_atomic(out_path, csv);
  const PhasePoint& last = tr.states.back();
  std::cerr << "integrated to t=" << tr.times.back() << " z=" << last.z()
            << " steps=" << tr.n_steps << "\n";
  return 0;
}

int cmd_search_trapped(const std::string& scenario_path, double zmin, double zmax,
                       double tfwd, double tbwd, const std::string& prefix) {
  const ScenarioConfig sc = load_or_default(scenario_path);
  const BuiltModel bm = build_model(sc);

  EscapeBox box{0.2, 4.0, 3.0};
  const auto family = default_torus_family(sc.n, std::vector<double>(sc.n, 0.0));
  const TrappedOrbitResult res = search_trapped(bm.model, family, zmin, zmax, tfwd,
                                                tbwd, box, sc.integrator);

  json summary;
  summary["s_star"] = res.s_star;
  summary["bracket_width"] = res.bracket_width;
  summary["forward_stays"] = res.forward.termination == Termination::Horizon;
  summary["backward_escaped"] = res.backward_escaped;
  summary["backward_escape_time"] = res.backward_escape_time;

  if (!prefix.empty()) {
    write_file_atomic(prefix + "_forward.csv", orbit_csv(res.forward, bm.model));
    write_file_atomic(prefix + "_backward.csv", orbit_csv(res.backward, bm.model));
    write_file_atomic(prefix + "_summary.json", summary.dump(2) + "\n");
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reeb-flow invariant-set construction toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, report_path, x0_str, torus_str, prefix;
  std::uint64_t seed = 0;
  int samples = 0, threads = 0;
  double T = 10.0, rtol = 0.0, atol = 0.0;
  double zmin = -2.0, zmax = -0.001, tfwd = 1000.0, tbwd = 100.0;

  auto* build = app.add_subcommand("build", "build a model and dump it as JSON");
  build->add_option("--scenario", scenario_path, "scenario JSON path (default scenario if omitted)");
  build->add_option("--out", out_path, "output model JSON path (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "run the full certificate suite");
  verify->add_option("--scenario", scenario_path);
  verify->add_option("--report", report_path, "report JSON path");
  verify->add_option("--samples", samples, "base sample count override");
  verify->add_option("--seed", seed, "RNG seed (default 0)");
  verify->add_option("--threads", threads, "worker threads (default: machine cores)");

  auto* integ = app.add_subcommand("integrate", "integrate one Reeb orbit to CSV");
  integ->add_option("--scenario", scenario_path);
  integ->add_option("--x0", x0_str, "comma-separated x1,y1,...,xn,yn,z");
  integ->add_option("--on-torus", torus_str, "comma-separated torus angles (r=1, z=0)");
  integ->add_option("--t", T, "integration time (negative runs backward)");
  integ->add_option("--rtol", rtol);
  integ->add_option("--atol", atol);
  integ->add_option("--out", out_path, "orbit CSV path (stdout if omitted)");

  auto* search = app.add_subcommand("search-trapped", "bisect for a forward-trapped orbit");
  search->add_option("--scenario", scenario_path);
  search->add_option("--zmin", zmin);
  search->add_option("--zmax", zmax);
  search->add_option("--tfwd", tfwd);
  search->add_option("--tbwd", tbwd);
  search->add_option("--out", prefix, "output prefix for CSVs and summary JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build(scenario_path, out_path);
    if (verify->parsed())
      return cmd_verify(scenario_path, report_path, seed, samples, threads);
    if (integ->parsed())
      return cmd_integrate(scenario_path, x0_str, torus_str, T, rtol, atol, out_path);
    if (search->parsed())
      return cmd_search_trapped(scenario_path, zmin, zmax, tfwd, tbwd, prefix);
  } catch (const NoBracket& e) {
    std::cerr << "search failure: " << e.what() << "\n";
    return 3;
  } catch (const ConstraintViolation& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
