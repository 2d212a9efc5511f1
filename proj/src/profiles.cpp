#include "reeb/profiles.hpp"

#include <array>
#include <cmath>
#include <cstddef>

#include "reeb/errors.hpp"

namespace reeb {

namespace {

double bump_s(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double bump_s_prime(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

// Smooth 0 -> 1 step on [0, 1].
double ramp01(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double A = bump_s(t), B = bump_s(1.0 - t);
  return A / (A + B);
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <typename Fn>
double gauss_legendre(Fn&& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t i = 0; i < kGlNodes.size(); ++i)
    s += kGlWeights[i] * (f(mid + half * kGlNodes[i]) + f(mid - half * kGlNodes[i]));
  return half * s;
}

constexpr int kTableSize = 4096;

}  // namespace

double RhoProfile::operator()(double r) const {
  if (r <= 1.0 / 3.0) return 0.0;
  if (r >= 2.0 / 3.0) return 1.0;
  const double A = bump_s(3.0 * r - 1.0), B = bump_s(2.0 - 3.0 * r);
  return A / (A + B);
}

double RhoProfile::derivative(double r) const {
  if (r <= 1.0 / 3.0 || r >= 2.0 / 3.0) return 0.0;
  const double A = bump_s(3.0 * r - 1.0), B = bump_s(2.0 - 3.0 * r);
  const double Ap = 3.0 * bump_s_prime(3.0 * r - 1.0);
  const double Bp = -3.0 * bump_s_prime(2.0 - 3.0 * r);
  const double den = A + B;
  return (Ap * B - A * Bp) / (den * den);
}

GProfile build_G(double lambda, double C) {
  if (!(lambda > 1.0 && lambda < std::exp(C)))
    throw ConstraintViolation("build_G requires 1 < lambda < e^C");

  GProfile g;
  g.lambda_ = lambda;
  g.C_ = C;
  const double u1 = std::log(lambda);  // log lambda > 0, and < C
  const double w = std::min(C - u1, u1);
  g.w_ = w;

  // Root-find the ramp start a from
  //   F(a) = integral_a^{u1} g'_a(u) du - u1 = 0,
  // which is strictly decreasing in a. Bracket inside (u0, u1 - w).
  auto ramp_area = [&](double a) {
    return gauss_legendre([&](double u) { return ramp01((u - a) / w); }, a, a + w);
  };
  auto F = [&](double a) { return ramp_area(a) + (u1 - (a + w)) - u1; };

  double lo = u1 - C, hi = u1 - w;
  if (!(F(lo) > 0.0 && F(hi) < 0.0))
    throw InfeasibleRamp("ramp-start bracket failed for lambda=" +
                         std::to_string(lambda) + ", C=" + std::to_string(C));
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) > 0.0 ? lo : hi) = mid;
  }
  g.a_ = 0.5 * (lo + hi);

  // Dense cumulative table for g on [a, a+w], per-interval quadrature.
  g.table_g_.resize(kTableSize + 1);
  g.table_gp_.resize(kTableSize + 1);
  const double h = w / kTableSize;
  g.table_g_[0] = 0.0;
  g.table_gp_[0] = 0.0;
  for (int i = 1; i <= kTableSize; ++i) {
    const double ua = g.a_ + (i - 1) * h, ub = g.a_ + i * h;
    g.table_g_[i] =
        g.table_g_[i - 1] +
        gauss_legendre([&](double u) { return ramp01((u - g.a_) / w); }, ua, ub);
    g.table_gp_[i] = ramp01((ub - g.a_) / w);
  }
  return g;
}

double GProfile::plateau_end() const { return lambda_ * std::exp(-C_); }

double GProfile::identity_start() const { return std::exp(a_ + w_); }

double GProfile::g_at_log(double u) const {
  if (u <= a_) return 0.0;
  if (u >= a_ + w_) return u;  // identity branch, exact
  const double h = w_ / kTableSize;
  const double x = (u - a_) / h;
  int i = static_cast<int>(x);
  if (i >= kTableSize) i = kTableSize - 1;
  const double t = x - i;
  // Cubic Hermite with exact slopes at the nodes.
  const double g0 = table_g_[i], g1 = table_g_[i + 1];
  const double d0 = h * table_gp_[i], d1 = h * table_gp_[i + 1];
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * g0 + (t3 - 2 * t2 + t) * d0 +
         (-2 * t3 + 3 * t2) * g1 + (t3 - t2) * d1;
}

double GProfile::log_slope_at_log(double u) const {
  if (u <= a_) return 0.0;
  if (u >= a_ + w_) return 1.0;
  return ramp01((u - a_) / w_);
}

double GProfile::operator()(double t) const {
  const double u = std::log(t);
  if (u <= a_) return 1.0;
  if (u >= a_ + w_) return t;
  return std::exp(g_at_log(u));
}

double GProfile::derivative(double t) const {
  const double u = std::log(t);
  if (u <= a_) return 0.0;
  if (u >= a_ + w_) return 1.0;
  return (*this)(t)*log_slope_at_log(u) / t;
}

}  // namespace reeb
