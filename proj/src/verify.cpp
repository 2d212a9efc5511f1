#include "reeb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <nlohmann/json.hpp>

#include "reeb/errors.hpp"
#include "reeb/gridutil.hpp"
#include "reeb/rng.hpp"

namespace reeb {

namespace {

using nlohmann::json;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Worst {
  double value = kNegInf;
  std::uint64_t index = 0;
};

// Max of badness(i) over i < count, sharded across threads. The per-index
// values are pure functions of the index (counter-based RNG), so sharding
// cannot change the result; ties keep the lowest index.
Worst sample_worst(std::uint64_t count, int threads,
                   const std::function<double(std::uint64_t)>& badness) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, 32));
  std::vector<Worst> partial(threads);
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      Worst w;
      const std::uint64_t lo = t * chunk, hi = std::min<std::uint64_t>(count, lo + chunk);
      for (std::uint64_t i = lo; i < hi; ++i) {
        const double v = badness(i);
        if (v > w.value) {
          w.value = v;
          w.index = i;
        }
      }
      partial[t] = w;
    });
  }
  for (auto& th : pool) th.join();
  Worst w;
  for (const Worst& pw : partial)
    if (pw.value > w.value) w = pw;
  return w;
}

// Uniform random point of A (theta coordinates) for the supported kinds.
std::vector<double> random_point_on_A(const InvariantSetSpec& spec, const CounterRng& rng,
                                      std::uint64_t index) {
  const int n = spec.n;
  std::vector<double> th(n);
  switch (spec.kind) {
    case InvariantSetKind::FullTorus:
      for (int j = 0; j < n; ++j) th[j] = rng.uniform(index * n + j, 0.0, kTwoPi);
      break;
    case InvariantSetKind::SubTorus: {
      for (int j = 0; j < n; ++j) th[j] = rng.uniform(index * n + j, 0.0, kTwoPi);
      for (std::size_t i = 0; i < spec.fixed_indices.size(); ++i)
        th[spec.fixed_indices[i]] = spec.fixed_values[i];
      break;
    }
    case InvariantSetKind::PeriodicOrbit: {
      const double t = rng.uniform(index, 0.0, kTwoPi);
      for (int j = 0; j < n; ++j)
        th[j] = spec.theta0[j] + t * static_cast<double>(spec.direction[j]);
      break;
    }
    case InvariantSetKind::Custom: {
      const auto& cloud = spec.cloud;
      th = cloud[static_cast<std::size_t>(rng.uniform(index, 0.0, 1.0) * cloud.size()) %
                 cloud.size()];
      break;
    }
  }
  return th;
}

PhasePoint random_box_point(const CounterRng& rng, std::uint64_t index, int n,
                            double r_lo, double r_hi, double z_abs) {
  std::vector<double> r(n), th(n);
  const std::uint64_t base = index * (2 * n + 1);
  for (int j = 0; j < n; ++j) {
    r[j] = rng.uniform(base + 2 * j, r_lo, r_hi);
    th[j] = rng.uniform(base + 2 * j + 1, 0.0, kTwoPi);
  }
  const double z = rng.uniform(base + 2 * n, -z_abs, z_abs);
  return PhasePoint::from_polar(r, th, z);
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> fd_gradient_oracle(
    const std::function<double(const PhasePoint&)>& field, const PhasePoint& p,
    double step) {
  std::vector<double> g(p.coords.size());
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    PhasePoint hi = p, lo = p;
    hi.coords[i] += step;
    lo.coords[i] -= step;
    g[i] = (field(hi) - field(lo)) / (2.0 * step);
  }
  return g;
}

json VerificationReport::to_json() const {
  json j;
  j["scenario_hash"] = scenario_hash;
  j["seed"] = seed;
  j["checks"] = json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"anchor", c.anchor},
                           {"samples", c.samples},
                           {"worst", c.worst},
                           {"witness", c.witness},
                           {"pass", c.pass}});
  }
  j["pass"] = pass;
  return j;
}

VerificationReport run_suite(const ScenarioConfig& sc, std::uint64_t seed,
                             const VerifyPlan& plan) {
  sc.validate();  // pre-stage: ConstraintViolation propagates

  VerificationReport report;
  report.scenario_hash = scenario_hash(sc);
  report.seed = seed;
  auto add = [&](CheckRecord c) { report.checks.push_back(std::move(c)); };

  const int n = sc.n;
  const double lambda = sc.lambda;
  NormalizedField k = normalize_field(sc.V, lambda);
  TrigPoly mu = build_mu(sc.invariant_set);

  // --- b certificates ---------------------------------------------------
  double b;
  MinEigResult eig;
  LemmaLCertificate lemma;
  if (sc.b) {
    b = *sc.b;
    eig = min_eig_over_torus(b, k);
    lemma = check_lemma_L(b, sc.C, k);
  } else {
    auto found = find_b(sc.C, k);
    b = found.b;
    eig = min_eig_over_torus(b, k);
    lemma = found.lemma_certificate;
  }
  add({"b-positive-definite", "A(b) eigenvalues", 0, eig.min_eig, eig.argmin_theta,
       eig.min_eig > 0.0});
  add({"b-region-L-margin", "Q^b[2] > 1+C on L", 0, lemma.margin, lemma.argmin_r,
       lemma.margin > 0.0});

  if (eig.min_eig <= 0.0) {
    report.pass = false;
    return report;
  }
  HamiltonianModel m(k, mu, sc.C, b, eig.min_eig);

  // --- profiles ---------------------------------------------------------
  {
    const RhoProfile& rho = m.rho();
    double worst = std::max(std::abs(rho(1.0 / 3.0)), std::abs(rho(2.0 / 3.0) - 1.0));
    worst = std::max(worst, std::abs(rho(0.5) - 0.5));
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double r = i / 1000.0;
      const double v = rho(r);
      worst = std::max(worst, prev - v);  // monotone nondecreasing
      prev = v;
    }
    add({"rho-profile", "(rho1)/(rho2)", 1001, worst, {}, worst <= 1e-12});
  }
  {
    const GProfile& G = m.G();
    double worst = std::abs(G(lambda) - lambda);
    worst = std::max(worst, std::abs(G(G.plateau_end()) - 1.0));
    worst = std::max(worst, std::abs(G(0.5 * G.plateau_end()) - 1.0));
    double prev = 0.0;
    for (std::uint64_t i = 0; i <= plan.samples_profile; ++i) {
      const double t =
          G.plateau_end() * 0.1 *
          std::pow(100.0 * lambda / (0.1 * G.plateau_end()),
                   static_cast<double>(i) / plan.samples_profile);
      const double v = G(t);
      worst = std::max(worst, prev - v);
      prev = v;
    }
    add({"G-profile", "(G1)/(G2)", plan.samples_profile, worst, {}, worst <= 1e-10});

    double g3 = kNegInf;
    for (std::uint64_t i = 0; i <= plan.samples_profile; ++i) {
      const double u = std::log(0.1 * G.plateau_end()) +
                       (std::log(10.0 * lambda) - std::log(0.1 * G.plateau_end())) *
                           static_cast<double>(i) / plan.samples_profile;
      g3 = std::max(g3, G.log_slope_at_log(u) - 1.0);
    }
    add({"G3-log-slope", "(G3)", plan.samples_profile, g3, {}, g3 <= plan.tol_g3});
  }

  // --- (H1): positivity -------------------------------------------------
  {
    CounterRng rng(seed, "H1");
    auto w = sample_worst(plan.samples_reeb, plan.threads, [&](std::uint64_t i) {
      const PhasePoint p = random_box_point(rng, i, n, 1e-6, 4.0, 2.0);
      return -eval_H(m, p);  // badness: -H, must stay negative
    });
    const PhasePoint wp = random_box_point(rng, w.index, n, 1e-6, 4.0, 2.0);
    add({"H1-positivity", "(H1)", plan.samples_reeb, -w.value, wp.coords, -w.value > 0.0});
  }

  // --- (H2): support shell ----------------------------------------------
  SupportBounds bounds{};
  {
    CheckRecord c{"H2-support-shell", "(H2)", plan.samples_shell, 0.0, {}, true};
    try {
      bounds = support_bounds(m, static_cast<int>(plan.samples_shell));
    } catch (const ShellViolation& e) {
      c.pass = false;
      c.witness = e.witness;
      c.worst = 1.0;
    }
    add(std::move(c));
  }

  // --- (H3): margin off the invariant set -------------------------------
  {
    CounterRng rng(seed, "H3");
    auto eligible = [&](std::uint64_t i) {
      const PhasePoint p = random_box_point(rng, i, n, 1e-6, 4.0, 2.0);
      return std::pair(p, distance_to_invariant_set(p, sc.invariant_set) >
                              plan.eps_invariant);
    };
    auto w = sample_worst(plan.samples_h3, plan.threads, [&](std::uint64_t i) {
      auto [p, ok] = eligible(i);
      return ok ? -h3_margin(m, p) : kNegInf;
    });
    add({"H3-margin", "(H3)", plan.samples_h3, -w.value, eligible(w.index).first.coords,
         -w.value > 0.0});

    CounterRng rng_on(seed, "H3-onset");
    auto w_on = sample_worst(100, plan.threads, [&](std::uint64_t i) {
      const auto th = random_point_on_A(sc.invariant_set, rng_on, i);
      const std::vector<double> r(n, 1.0);
      return std::abs(h3_margin(m, PhasePoint::from_polar(r, th, 0.0)));
    });
    add({"H3-boundary-equality", "(H3)", 100, w_on.value, {}, w_on.value <= 1e-9});
  }

  // --- (H4): values on A x {0} ------------------------------------------
  {
    CounterRng rng(seed, "H4");
    auto badness = [&](std::uint64_t i) {
      const auto th = random_point_on_A(sc.invariant_set, rng, i);
      const std::vector<double> r(n, 1.0);
      const PhasePoint p = PhasePoint::from_polar(r, th, 0.0);
      const auto kv = m.k().k(th);
      const PolarGradient g = grad_H(m, p);
      double bad = std::abs(eval_H(m, p) - lambda);
      for (int j = 0; j < n; ++j) {
        bad = std::max(bad, std::abs(g.dr[j] - 2.0 * lambda * kv[j]));
        bad = std::max(bad, std::abs(g.dtheta[j]));
      }
      return std::max(bad, std::abs(g.dz));
    };
    auto w = sample_worst(plan.samples_h4, plan.threads, badness);
    add({"H4-values-on-A", "(H4)", plan.samples_h4, w.value, {}, w.value <= plan.tol_h4});
  }

  // --- identity for the radial derivative of Q --------------------------
  {
    CounterRng rng(seed, "dQ");
    QuadForm q2{b, &k, 2.0}, q1{b, &k, 1.0};
    auto badness = [&](std::uint64_t i) {
      const PhasePoint p = random_box_point(rng, i, n, 0.05, 5.0, 0.0);
      const auto r = p.radii(), th = p.angles();
      const auto g = grad_Q(q2, r, th);
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += r[j] * g.dr[j];
      const double q1v = eval_Q(q1, r, th);
      return std::abs(lhs - (2.0 * q1v - 2.0)) / (1.0 + std::abs(q1v));
    };
    auto w = sample_worst(plan.samples_dq, plan.threads, badness);
    add({"Q-radial-identity", "sum r_j Q^b[2]_{r_j} = 2Q^b[1] - 2", plan.samples_dq,
         w.value, {}, w.value <= plan.tol_dq_rel});
  }

  // --- gradients vs central differences ---------------------------------
  {
    CounterRng rng(seed, "grad-fd");
    auto badness = [&](std::uint64_t i) {
      const PhasePoint p = random_box_point(rng, i, n, 0.4, 3.5, 1.5);
      const auto fdK = fd_gradient_oracle(
          [&](const PhasePoint& q) { return eval_K(m, q); }, p, 1e-5);
      const auto anK = cartesian_grad_K(m, p);
      const auto fdH = fd_gradient_oracle(
          [&](const PhasePoint& q) { return eval_H(m, q); }, p, 1e-5);
      const auto anH = cartesian_grad_H(m, p);
      double diffK = 0.0, diffH = 0.0;
      for (std::size_t c = 0; c < anK.size(); ++c) {
        diffK = std::max(diffK, std::abs(fdK[c] - anK[c]));
        diffH = std::max(diffH, std::abs(fdH[c] - anH[c]));
      }
      return std::max(diffK / (1.0 + norm(anK)), diffH / (1.0 + norm(anH)));
    };
    auto w = sample_worst(plan.samples_grad, plan.threads, badness);
    add({"gradient-finite-difference", "invented", plan.samples_grad, w.value, {},
         w.value <= plan.tol_grad_rel});
  }

  // --- Reeb residuals ----------------------------------------------------
  {
    CounterRng rng(seed, "reeb");
    auto badness = [&](std::uint64_t i) {
      const PhasePoint p = random_box_point(rng, i, n, 1e-6, 4.0, 2.0);
      const auto res = certify_reeb(m, p);
      return std::max(res.alpha_residual / plan.tol_alpha,
                      res.dalpha_residual / plan.tol_dalpha);
    };
    auto w = sample_worst(plan.samples_reeb, plan.threads, badness);
    add({"reeb-residuals", "alpha(R)=1, i(R)dalpha=0", plan.samples_reeb, w.value, {},
         w.value <= 1.0});
  }

  // --- (X1): positive transversality ------------------------------------
  {
    CounterRng rng(seed, "X1");
    auto badness = [&](std::uint64_t i) {
      const PhasePoint p = random_box_point(rng, i, n, 1e-6, 4.0, 2.0);
      const double pairing = alpha_st(p, reeb_field(m, p));
      const double H = eval_H(m, p);
      // transversality and the correspondence round trip alpha_st(X) = H
      return std::max(-pairing, std::abs(pairing - H) / (1.0 + H) - 1e-12);
    };
    auto w = sample_worst(plan.samples_reeb, plan.threads, badness);
    add({"X1-transversality", "(X1)", plan.samples_reeb, w.value, {}, w.value <= 1e-10});
  }

  // --- (X2): field is d/dz outside the support box ----------------------
  {
    CounterRng rng(seed, "X2");
    auto badness = [&](std::uint64_t i) {
      std::vector<double> r(n), th(n);
      const std::uint64_t base = i * (2 * n + 2);
      for (int j = 0; j < n; ++j) th[j] = rng.uniform(base + j, 0.0, kTwoPi);
      double z;
      if (i % 2 == 0) {
        for (int j = 0; j < n; ++j) r[j] = rng.uniform(base + n + j, 1e-3, bounds.r_max);
        const double sgn = rng.uniform(base + 2 * n) < 0.5 ? -1.0 : 1.0;
        z = sgn * rng.uniform(base + 2 * n + 1, bounds.z_max, bounds.z_max + 3.0);
      } else {
        for (int j = 0; j < n; ++j)
          r[j] = rng.uniform(base + n + j, 1e-3, bounds.r_max + 3.0);
        r[i % n] = rng.uniform(base + 2 * n, bounds.r_max, bounds.r_max + 3.0);
        z = rng.uniform(base + 2 * n + 1, -bounds.z_max, bounds.z_max);
      }
      const PhasePoint p = PhasePoint::from_polar(r, th, z);
      const TangentVector X = reeb_field(m, p);
      double worst = std::abs(X.dz() - 1.0);
      for (int c = 0; c < 2 * n; ++c) worst = std::max(worst, std::abs(X[c]));
      return worst;
    };
    auto w = sample_worst(plan.samples_shell, plan.threads, badness);
    add({"X2-standard-outside", "(X2)", plan.samples_shell, w.value, {},
         w.value <= plan.tol_shell});
  }

  // --- (X3): dz(X) > 0 off the invariant set ----------------------------
  {
    CounterRng rng(seed, "X3");
    auto badness = [&](std::uint64_t i) {
      const PhasePoint p = random_box_point(rng, i, n, 1e-6, 4.0, 2.0);
      if (distance_to_invariant_set(p, sc.invariant_set) <= plan.eps_invariant)
        return kNegInf;
      return -dz_rate(m, p);
    };
    auto w = sample_worst(plan.samples_h3, plan.threads, badness);
    add({"X3-z-rate", "(X3)", plan.samples_h3, -w.value, {}, -w.value > 0.0});
  }

  // --- (X4): field on A x {0} -------------------------------------------
  {
    CounterRng rng(seed, "X4");
    auto badness = [&](std::uint64_t i) {
      const auto th = random_point_on_A(sc.invariant_set, rng, i);
      const std::vector<double> r(n, 1.0);
      const PhasePoint p = PhasePoint::from_polar(r, th, 0.0);
      const auto kv = m.k().k(th);
      const TangentVector X = reeb_field(m, p);
      double bad = std::abs(X.dz());
      for (int j = 0; j < n; ++j) {
        bad = std::max(bad, std::abs(X[2 * j] - (-p.y(j) * 2.0 * lambda * kv[j])));
        bad = std::max(bad, std::abs(X[2 * j + 1] - p.x(j) * 2.0 * lambda * kv[j]));
      }
      return bad;
    };
    auto w = sample_worst(plan.samples_h4, plan.threads, badness);
    add({"X4-field-on-A", "(X4)", plan.samples_h4, w.value, {}, w.value <= plan.tol_h4});
  }

  // --- eigenvalue ratio asymptotics -------------------------------------
  {
    const std::vector<double> b_list = {1.0, 10.0, 100.0};
    const std::vector<double> th(n, 0.0);
    auto rows = eigen_asymptotics(b_list, k, th);
    double worst = kNegInf;
    for (std::size_t i = 1; i < rows.size(); ++i)
      worst = std::max(worst, rows[i].ratios[0] - rows[i - 1].ratios[0]);
    add({"eigen-ratio-decrease", "lambda_1(b)/lambda_i(b) -> 0", b_list.size(), worst,
         {}, worst < 0.0});
  }

  // --- Hausdorff convergence E(c) -> J(c) -------------------------------
  {
    const std::vector<double> th(n, 0.0);
    const double d10 = hausdorff_E_to_J(10.0, 1.0, k, th);
    const double d100 = hausdorff_E_to_J(100.0, 1.0, k, th);
    const double d1000 = hausdorff_E_to_J(1000.0, 1.0, k, th);
    const double worst = std::max(d100 - d10, d1000 - d100);
    add({"hausdorff-decrease", "E(c) converges to J(c)", 3, worst, {d10, d100, d1000},
         worst < 0.0});
  }

  // --- dynamics: torus drift and z-monotonicity -------------------------
  {
    IntegratorConfig cfg;
    cfg.rtol = cfg.atol = 1e-10;
    const auto samples = sc.invariant_set.sample_points(4);
    TorusDrift drift = torus_drift(m, samples.front(), plan.drift_T, cfg);
    const double worst = std::max(drift.max_r_dev, drift.max_z);
    add({"torus-drift", "invariant set of the flow", 1, worst, {},
         worst <= plan.tol_drift});

    std::vector<double> r(n, 1.0);
    const PhasePoint x0 = PhasePoint::from_polar(r, samples.front(), -0.5);
    OrbitTrace tr = integrate(m, x0, 20.0, sc.integrator);
    CheckRecord c{"z-monotonicity", "(X3)", tr.states.size(), 0.0, {}, true};
    try {
      auto zres = z_monotonicity_check(tr, m, sc.invariant_set, plan.eps_invariant);
      c.worst = zres.worst_rate;
    } catch (const MonotonicityViolation&) {
      c.pass = false;
      c.worst = -1.0;
    }
    add(std::move(c));
  }

  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const CheckRecord& c) { return c.pass; });
  return report;
}

}  // namespace reeb
