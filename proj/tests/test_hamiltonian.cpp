#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "reeb/errors.hpp"
#include "reeb/hamiltonian.hpp"
#include "reeb/profiles.hpp"
#include "reeb/rng.hpp"
#include "reeb/scenario.hpp"

using namespace reeb;

namespace {

HamiltonianModel const_model() {
  TorusVectorField V{{TrigPoly::constant(2, 1.0), TrigPoly::constant(2, 1.0)}};
  auto nf = normalize_field(V, 1.5);
  return HamiltonianModel(nf, TrigPoly::constant(2, 0.0), 0.7, 4.0, 0.5);
}

PhasePoint polar(std::vector<double> r, std::vector<double> th, double z) {
  return PhasePoint::from_polar(r, th, z);
}

// Simpson quadrature oracle for g(u) = integral of the ramp slope, used to
// cross-check the tabulated G away from its anchors.
double g_oracle(const GProfile& G, double u) {
  const double a = G.ramp_start();
  if (u <= a) return 0.0;
  const int N = 20000;
  const double lo = a, hi = u;
  double acc = G.log_slope_at_log(lo) + G.log_slope_at_log(hi);
  for (int i = 1; i < N; ++i)
    acc += (i % 2 ? 4.0 : 2.0) * G.log_slope_at_log(lo + (hi - lo) * i / N);
  return acc * (hi - lo) / (3.0 * N);
}

}  // namespace

TEST_CASE("rho profile thresholds and symmetry") {
  RhoProfile rho = build_rho();
  CHECK(rho(1.0 / 3) == 0.0);
  CHECK(rho(0.2) == 0.0);
  CHECK(rho(2.0 / 3) == 1.0);
  CHECK(rho(0.9) == 1.0);
  CHECK(rho(0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rho.derivative(0.2) == 0.0);
  CHECK(rho.derivative(0.9) == 0.0);
  CHECK(rho.derivative(0.5) > 0.0);
  // monotone and strictly inside (0,1) on the open ramp
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double r = 0.2 + 0.6 * i / 1000.0;
    const double v = rho(r);
    CHECK(v >= prev - 1e-15);
    prev = v;
    // the exp(-1/t) ratio saturates to 0/1 in double precision within
    // ~0.01 of the endpoints, so test strict interiority away from them
    if (r > 1.0 / 3 + 0.02 && r < 2.0 / 3 - 0.02) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
  }
}

TEST_CASE("G profile anchors, slope bound, and quadrature oracle") {
  GProfile G = build_G(1.5, 0.7);
  CHECK(G(1.5) == doctest::Approx(1.5).epsilon(1e-12));      // identity near lambda
  CHECK(G(0.70) == doctest::Approx(1.0).epsilon(1e-14));     // below lambda e^{-C}
  CHECK(G(0.3) == 1.0);
  CHECK(G(1.0) >= 1.0);
  CHECK(G(1.0) <= 1.5);
  CHECK(G(2.7) == doctest::Approx(2.7).epsilon(1e-12));
  // monotone between anchors
  double prev = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double t = 0.5 + 2.0 * i / 2000.0;
    const double v = G(t);
    CHECK(v >= prev - 1e-13);
    prev = v;
    // (G3): t (log G)'(t) = g'(log t) <= 1
    CHECK(G.log_slope_at_log(std::log(t)) <= 1.0 + 1e-12);
  }
  // table vs independent Simpson integration of the ramp slope
  for (double u : {std::log(0.9), std::log(1.1), std::log(1.3)}) {
    CHECK(std::log(G(std::exp(u))) == doctest::Approx(g_oracle(G, u)).epsilon(1e-8));
  }
  // the ramp must make G continuous into the identity branch
  CHECK(G(G.identity_start()) == doctest::Approx(G.identity_start()).epsilon(1e-10));
  CHECK_THROWS_AS(build_G(2.5, 0.7), ConstraintViolation);  // lambda >= e^C
}

TEST_CASE("K values from the closed form") {
  auto m = const_model();
  CHECK(eval_K(m, polar({1, 1}, {0.3, 1.2}, 0.0)) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(eval_K(m, polar({2, 2}, {0, 0}, 0.0)) ==
        doctest::Approx(1.5 * std::exp(1.0)).epsilon(1e-13));  // 4.0774230
  // some r_j <= 1/3: exact constant lambda e^{-C}
  CHECK(eval_K(m, polar({0.2, 1.7}, {0, 0}, 0.37)) ==
        doctest::Approx(1.5 * std::exp(-0.7)).epsilon(1e-15));  // 0.7448776
  CHECK(eval_K(m, PhasePoint(std::vector<double>{0, 0, 0, 0, 2.0})) ==
        doctest::Approx(1.5 * std::exp(-0.7)).epsilon(1e-15));
}

TEST_CASE("gradients on the invariant torus") {
  auto m = const_model();
  auto p = polar({1, 1}, {0.9, 2.2}, 0.0);
  auto gK = grad_K(m, p);
  CHECK(gK.dr[0] == doctest::Approx(1.5).epsilon(1e-12));  // 2 lambda k_j
  CHECK(gK.dr[1] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(std::abs(gK.dtheta[0]) <= 1e-12);
  CHECK(std::abs(gK.dz) <= 1e-12);
  CHECK(eval_H(m, p) == doctest::Approx(1.5).epsilon(1e-12));
  auto gH = grad_H(m, p);
  CHECK(gH.dr[0] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(gH.dr[1] == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("gradients vanish where K is constant") {
  auto m = const_model();
  auto p = polar({0.25, 2.0}, {1.0, -0.3}, 0.8);
  auto g = grad_K(m, p);
  CHECK(g.dr[0] == 0.0);
  CHECK(g.dr[1] == 0.0);
  CHECK(g.dz == 0.0);
  CHECK(eval_H(m, p) == 1.0);
  auto gH = grad_H(m, p);
  CHECK(gH.dr[0] == 0.0);
  CHECK(gH.dz == 0.0);
}

TEST_CASE("grad_K and grad_H match central differences") {
  auto m = const_model();
  CounterRng rng(5, "ham-fd");
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> r{rng.uniform(5 * i, 0.4, 3.5), rng.uniform(5 * i + 1, 0.4, 3.5)};
    std::vector<double> th{rng.uniform(5 * i + 2, 0, 6.28), rng.uniform(5 * i + 3, 0, 6.28)};
    const double z = rng.uniform(5 * i + 4, -1.5, 1.5);

    for (bool use_H : {false, true}) {
      auto eval = [&](std::vector<double> rr, std::vector<double> tt, double zz) {
        auto p = polar(rr, tt, zz);
        return use_H ? eval_H(m, p) : eval_K(m, p);
      };
      const auto g = use_H ? grad_H(m, polar(r, th, z)) : grad_K(m, polar(r, th, z));
      for (int j = 0; j < 2; ++j) {
        auto rh = r, rl = r;
        rh[j] += h;
        rl[j] -= h;
        const double fd = (eval(rh, th, z) - eval(rl, th, z)) / (2 * h);
        CHECK(std::abs(g.dr[j] - fd) <= 1e-6 * (1 + std::abs(fd)));
      }
      const double fdz = (eval(r, th, z + h) - eval(r, th, z - h)) / (2 * h);
      CHECK(std::abs(g.dz - fdz) <= 1e-6 * (1 + std::abs(fdz)));
    }
  }
}

TEST_CASE("radial log derivative cases") {
  auto m = const_model();
  CHECK(radial_log_derivative(m, polar({0.3, 2.0}, {0, 0}, 0.0)) == 0.0);
  // exactly 2 on the invariant torus (boundary case of the bound)
  CHECK(radial_log_derivative(m, polar({1, 1}, {0.4, 0.4}, 0.0)) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(radial_log_derivative(m, polar({2, 2}, {0, 0}, 0.5)) < 2.0);
}

TEST_CASE("h3 margin values") {
  auto m = const_model();
  CHECK(h3_margin(m, polar({0.25, 3.0}, {0, 0}, 2.0)) == doctest::Approx(1.0));
  CHECK(std::abs(h3_margin(m, polar({1, 1}, {1.1, 0.2}, 0.0))) <= 1e-9);
  // strictly positive off the set
  CounterRng rng(9, "h3");
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> r{rng.uniform(5 * i, 0.05, 4.0), rng.uniform(5 * i + 1, 0.05, 4.0)};
    std::vector<double> th{rng.uniform(5 * i + 2, 0, 6.28), rng.uniform(5 * i + 3, 0, 6.28)};
    const double z = rng.uniform(5 * i + 4, -2.0, 2.0);
    const double d = std::sqrt((r[0] - 1) * (r[0] - 1) + (r[1] - 1) * (r[1] - 1) + z * z);
    if (d <= 0.05) continue;
    CHECK(h3_margin(m, polar(r, th, z)) > 0.0);
  }
}

TEST_CASE("support bounds and the far plateau") {
  auto m = const_model();
  auto sb = support_bounds(m);
  CHECK(sb.z_max == doctest::Approx(std::sqrt(2.55)).epsilon(1e-12));  // 1.5968720
  CHECK(sb.r_max == doctest::Approx(2 + std::sqrt(1.7 / 0.5) + 0.01).epsilon(1e-12));
  // beyond the shell H == 1
  CHECK(eval_H(m, polar({1, 1}, {0, 0}, sb.z_max + 0.3)) == doctest::Approx(1.0));
  CHECK(eval_H(m, polar({sb.r_max + 0.5, 1}, {0, 0}, 0.0)) == doctest::Approx(1.0));
}

TEST_CASE("model construction rejects bad parameters") {
  TorusVectorField V{{TrigPoly::constant(2, 1.0), TrigPoly::constant(2, 1.0)}};
  auto nf = normalize_field(V, 1.5);
  CHECK_THROWS_AS(HamiltonianModel(nf, TrigPoly::constant(2, 0.0), 0.8, 4.0, 0.5),
                  ConstraintViolation);
  CHECK_THROWS_AS(HamiltonianModel(nf, TrigPoly::constant(2, 0.0), 0.7, 4.0, -0.1),
                  ConstraintViolation);
}
