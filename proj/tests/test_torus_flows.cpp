#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "reeb/errors.hpp"
#include "reeb/torus_flows.hpp"
#include "reeb/trig_poly.hpp"

using namespace reeb;

namespace {

const double kPi = std::numbers::pi;

TrigPoly cospoly(int n, std::vector<std::int64_t> m, double a, double s = 0.0) {
  return TrigPoly(n, {{std::move(m), a, s}});
}

}  // namespace

TEST_CASE("trig poly evaluation and periodicity") {
  // 0.3 + cos(2 t1 - t2) + 0.5 sin(t2)
  TrigPoly p(2, {{{0, 0}, 0.3, 0.0}, {{2, -1}, 1.0, 0.0}, {{0, 1}, 0.0, 0.5}});
  std::vector<double> th{0.7, -1.1};
  const double expect = 0.3 + std::cos(2 * 0.7 + 1.1) + 0.5 * std::sin(-1.1);
  CHECK(p.value(th) == doctest::Approx(expect).epsilon(1e-14));

  for (int j = 0; j < 2; ++j) {
    auto shifted = th;
    shifted[j] += 2 * kPi;
    CHECK(p.value(shifted) == doctest::Approx(p.value(th)).epsilon(1e-13));
  }
}

TEST_CASE("trig poly partials match central differences") {
  TrigPoly p(3, {{{1, 0, -2}, 0.8, -0.4}, {{0, 3, 1}, 0.1, 0.9}});
  std::vector<double> th{0.2, 1.4, -0.6};
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    auto hi = th, lo = th;
    hi[j] += h;
    lo[j] -= h;
    const double fd = (p.value(hi) - p.value(lo)) / (2 * h);
    CHECK(p.partial(th, j) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("normalize_field produces k and f of the default data") {
  TorusVectorField V{{TrigPoly::constant(2, 1.0), TrigPoly::constant(2, std::sqrt(2.0))}};
  auto nf = normalize_field(V, 1.5);
  std::vector<double> th{0.3, 2.1};
  auto k = nf.k(th);
  CHECK(k[0] == doctest::Approx(0.4142136).epsilon(1e-6));
  CHECK(k[1] == doctest::Approx(0.5857864).epsilon(1e-6));
  CHECK(nf.f(th) == doctest::Approx(1.2426407).epsilon(1e-7));  // 2*1.5/(1+sqrt 2)
}

TEST_CASE("k sums to one on a grid") {
  // non-constant coefficients, still positive everywhere
  TorusVectorField V{{cospoly(2, {1, 0}, 0.3) + TrigPoly::constant(2, 2.0),
                      cospoly(2, {0, 2}, 0.0, 0.4) + TrigPoly::constant(2, 1.0)}};
  auto nf = normalize_field(V, 1.2);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      std::vector<double> th{2 * kPi * i / 64, 2 * kPi * j / 64};
      auto k = nf.k(th);
      CHECK(std::abs(k[0] + k[1] - 1.0) <= 1e-14);
      // f V = 2 lambda sum k_j d/dtheta_j componentwise
      for (int c = 0; c < 2; ++c)
        CHECK(std::abs(nf.f(th) * V.nu[c].value(th) - 2 * 1.2 * k[c]) <= 1e-14);
    }
}

TEST_CASE("normalization commutes with positive rescaling of V") {
  TorusVectorField V{{cospoly(2, {1, 1}, 0.2) + TrigPoly::constant(2, 1.5),
                      TrigPoly::constant(2, 1.0)}};
  TorusVectorField V3{{V.nu[0].scaled(3.0), V.nu[1].scaled(3.0)}};
  auto a = normalize_field(V, 1.4);
  auto b = normalize_field(V3, 1.4);
  std::vector<double> th{1.0, -0.5};
  for (int j = 0; j < 2; ++j) CHECK(std::abs(a.k_j(th, j) - b.k_j(th, j)) <= 1e-14);
  CHECK(std::abs(a.f(th) - 3.0 * b.f(th)) <= 1e-13);  // f scales by 1/c
}

TEST_CASE("transversality violations are rejected") {
  TorusVectorField V{{TrigPoly::constant(2, 1.0), TrigPoly::constant(2, -1.0)}};
  CHECK_THROWS_AS(normalize_field(V, 1.5), TransversalityViolation);
  TorusVectorField ok{{TrigPoly::constant(2, 1.0), TrigPoly::constant(2, 1.0)}};
  CHECK_THROWS_AS(normalize_field(ok, 1.0), ConstraintViolation);  // lambda <= 1
}

TEST_CASE("k_partials match finite differences") {
  TorusVectorField V{{cospoly(2, {1, 0}, 0.3) + TrigPoly::constant(2, 2.0),
                      cospoly(2, {1, -1}, 0.0, 0.5) + TrigPoly::constant(2, 1.5)}};
  auto nf = normalize_field(V, 1.3);
  std::vector<double> th{0.9, 2.4};
  auto dk = nf.k_partials(th);
  const double h = 1e-6;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto hi = th, lo = th;
      hi[j] += h;
      lo[j] -= h;
      const double fd = (nf.k_j(hi, i) - nf.k_j(lo, i)) / (2 * h);
      CHECK(dk[i * 2 + j] == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("build_mu closed forms") {
  SUBCASE("full torus") {
    InvariantSetSpec spec;
    spec.kind = InvariantSetKind::FullTorus;
    spec.n = 2;
    auto mu = build_mu(spec);
    CHECK(mu.value(std::vector<double>{1.0, 2.0}) == doctest::Approx(0.0));
  }
  SUBCASE("subtorus theta_2 = 0") {
    InvariantSetSpec spec;
    spec.kind = InvariantSetKind::SubTorus;
    spec.n = 2;
    spec.fixed_indices = {1};
    spec.fixed_values = {0.0};
    auto mu = build_mu(spec);
    std::vector<double> th{0.7, 1.3};
    CHECK(mu.value(th) == doctest::Approx(1 - std::cos(1.3)).epsilon(1e-14));
    // vanishes to second order on the set
    std::vector<double> on{0.7, 0.0};
    CHECK(std::abs(mu.value(on)) <= 1e-12);
    CHECK(std::abs(mu.partial(on, 0)) <= 1e-12);
    CHECK(std::abs(mu.partial(on, 1)) <= 1e-12);
  }
  SUBCASE("periodic orbit direction (1,1)") {
    InvariantSetSpec spec;
    spec.kind = InvariantSetKind::PeriodicOrbit;
    spec.n = 2;
    spec.theta0 = {0.0, 0.0};
    spec.direction = {1, 1};
    auto mu = build_mu(spec);
    std::vector<double> th{0.9, -0.4};
    CHECK(mu.value(th) == doctest::Approx(1 - std::cos(0.9 + 0.4)).epsilon(1e-13));
    // zero along theta0 + t (1,1)
    std::vector<double> on{1.7, 1.7};
    CHECK(std::abs(mu.value(on)) <= 1e-12);
  }
}

TEST_CASE("annihilator basis spans the orthogonal lattice") {
  auto basis = annihilator_basis(std::vector<std::int64_t>{2, 3, 5});
  REQUIRE(basis.size() == 2);
  for (const auto& m : basis) {
    CHECK(m.size() == 3);
    CHECK(2 * m[0] + 3 * m[1] + 5 * m[2] == 0);
  }
  // the two generators must be linearly independent
  const bool indep = basis[0][0] * basis[1][1] != basis[0][1] * basis[1][0] ||
                     basis[0][1] * basis[1][2] != basis[0][2] * basis[1][1];
  CHECK(indep);
}

TEST_CASE("mu vanishes quadratically near the set") {
  InvariantSetSpec spec;
  spec.kind = InvariantSetKind::SubTorus;
  spec.n = 2;
  spec.fixed_indices = {1};
  spec.fixed_values = {0.5};
  auto mu = build_mu(spec);
  for (double d : {1e-2, 1e-3, 1e-4}) {
    std::vector<double> th{2.2, 0.5 + d};
    CHECK(mu.value(th) <= 0.51 * d * d);  // 1 - cos d <= d^2/2 (+ slack)
    CHECK(mu.value(th) >= 0.49 * d * d);
  }
}

TEST_CASE("check_invariance accepts invariant subtorus, rejects drifting one") {
  InvariantSetSpec spec;
  spec.kind = InvariantSetKind::SubTorus;
  spec.n = 2;
  spec.fixed_indices = {1};
  spec.fixed_values = {0.0};

  SUBCASE("nu_2 vanishing on the set keeps it invariant") {
    TorusVectorField V{{TrigPoly::constant(2, 1.0), cospoly(2, {0, 1}, 0.0, 1.0)}};
    CHECK(check_invariance(V, spec, 100.0, 1e-9) <= 1e-9);
  }
  SUBCASE("constant field leaves linearly") {
    TorusVectorField V{{TrigPoly::constant(2, 1.0), TrigPoly::constant(2, 1.0)}};
    CHECK_THROWS_AS(check_invariance(V, spec, 10.0, 1e-6), InvarianceViolation);
  }
  SUBCASE("full torus never drifts") {
    InvariantSetSpec full;
    full.kind = InvariantSetKind::FullTorus;
    full.n = 2;
    TorusVectorField V{{TrigPoly::constant(2, 1.0), TrigPoly::constant(2, 2.0)}};
    CHECK(check_invariance(V, full, 10.0, 1e-12) == doctest::Approx(0.0));
  }
}
