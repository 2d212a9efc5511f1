#include "reeb/hamiltonian.hpp"

#include <cmath>

#include "reeb/errors.hpp"
#include "reeb/gridutil.hpp"
#include "reeb/rng.hpp"

namespace reeb {

namespace {

constexpr double kRhoFloor = 1.0 / 3.0;

struct KParts {
  double K = 0.0;
  double T = 0.0;        // bracket quantity
  double P = 0.0;        // prod rho(r_l)
  double S = 0.0;        // sum r_j
  double Q = 0.0;        // Q^b[2]
  double mu = 0.0;
  std::vector<double> r, theta;
  std::vector<double> rho_vals;
};

KParts k_parts(const HamiltonianModel& m, const PhasePoint& p) {
  KParts kp;
  kp.r = p.radii();
  kp.theta = p.angles();
  const int n = m.dim();
  kp.P = 1.0;
  kp.S = 0.0;
  kp.rho_vals.resize(n);
  for (int j = 0; j < n; ++j) {
    kp.rho_vals[j] = m.rho()(kp.r[j]);
    kp.P *= kp.rho_vals[j];
    kp.S += kp.r[j];
  }
  QuadForm q{m.b(), &m.k(), 2.0};
  kp.Q = eval_Q(q, kp.r, kp.theta);
  kp.mu = m.mu().value(kp.theta);
  const double z = p.z();
  kp.T = 1.0 + m.C() - kp.Q - (z * z + kp.mu) * kp.S;
  kp.K = m.lambda() * std::exp(kp.T * kp.P - m.C());
  return kp;
}

}  // namespace

HamiltonianModel::HamiltonianModel(NormalizedField k, TrigPoly mu, double C, double b,
                                   double min_eig_certificate)
    : k_(std::move(k)),
      mu_(std::move(mu)),
      C_(C),
      b_(b),
      min_eig_(min_eig_certificate),
      G_(build_G(k_.lambda(), C)) {
  if (!(C > 0.0 && C < 7.0 / 9.0))
    throw ConstraintViolation("HamiltonianModel requires 0 < C < 7/9");
  if (min_eig_ <= 0.0)
    throw ConstraintViolation("HamiltonianModel requires a positive-definiteness certificate for b");
}

double eval_K(const HamiltonianModel& m, const PhasePoint& p) {
  if (p.min_r() <= kRhoFloor) return m.lambda() * std::exp(-m.C());
  return k_parts(m, p).K;
}

PolarGradient grad_K(const HamiltonianModel& m, const PhasePoint& p) {
  const int n = m.dim();
  PolarGradient g;
  g.dr.assign(n, 0.0);
  g.dtheta.assign(n, 0.0);
  if (p.min_r() <= kRhoFloor) return g;  // K locally constant

  const KParts kp = k_parts(m, p);
  const double z = p.z();
  QuadForm q{m.b(), &m.k(), 2.0};
  const QGradient qg = grad_Q(q, kp.r, kp.theta);

  for (int j = 0; j < n; ++j) {
    // d/dr_j of T*P: T_{r_j} P + T rho'(r_j) prod_{l != j} rho(r_l)
    const double T_rj = -qg.dr[j] - (z * z + kp.mu);
    double prod_others = 1.0;
    for (int l = 0; l < n; ++l)
      if (l != j) prod_others *= kp.rho_vals[l];
    g.dr[j] = kp.K * (T_rj * kp.P + kp.T * m.rho().derivative(kp.r[j]) * prod_others);
  }
  for (int j = 0; j < n; ++j) {
    const double T_thj = -qg.dtheta[j] - m.mu().partial(kp.theta, j) * kp.S;
    g.dtheta[j] = kp.K * kp.P * T_thj;
  }
  g.dz = kp.K * kp.P * (-2.0 * z * kp.S);
  return g;
}

double eval_H(const HamiltonianModel& m, const PhasePoint& p) {
  return m.G()(eval_K(m, p));
}

PolarGradient grad_H(const HamiltonianModel& m, const PhasePoint& p) {
  PolarGradient g = grad_K(m, p);
  const double gp = m.G().derivative(eval_K(m, p));
  for (auto& v : g.dr) v *= gp;
  for (auto& v : g.dtheta) v *= gp;
  g.dz *= gp;
  return g;
}

double radial_log_derivative(const HamiltonianModel& m, const PhasePoint& p) {
  if (p.min_r() <= kRhoFloor) return 0.0;
  const KParts kp = k_parts(m, p);
  const double z = p.z();
  QuadForm q{m.b(), &m.k(), 2.0};
  const QGradient qg = grad_Q(q, kp.r, kp.theta);

  const int n = m.dim();
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double T_rj = -qg.dr[j] - (z * z + kp.mu);
    double prod_others = 1.0;
    for (int l = 0; l < n; ++l)
      if (l != j) prod_others *= kp.rho_vals[l];
    sum += kp.r[j] *
           (T_rj * kp.P + kp.T * m.rho().derivative(kp.r[j]) * prod_others);
  }
  return sum * m.G().log_slope_at_log(std::log(kp.K));
}

double h3_margin(const HamiltonianModel& m, const PhasePoint& p) {
  const double H = eval_H(m, p);
  if (p.min_r() <= kRhoFloor) return H;
  const PolarGradient g = grad_H(m, p);
  double s = 0.0;
  for (int j = 0; j < m.dim(); ++j) s += p.r(j) * g.dr[j];
  return H - 0.5 * s;
}

SupportBounds support_bounds(const HamiltonianModel& m, int shell_samples) {
  const int n = m.dim();
  SupportBounds sb;
  sb.z_max = std::sqrt(3.0 * (1.0 + m.C()) / n);
  sb.r_max = 2.0 + std::sqrt((1.0 + m.C()) / m.min_eig()) + 0.01;

  CounterRng rng(0, "support-shell");
  std::uint64_t ctr = 0;
  auto draw = [&](double lo, double hi) { return rng.uniform(ctr++, lo, hi); };

  for (int s = 0; s < shell_samples; ++s) {
    std::vector<double> r(n), theta(n);
    for (int j = 0; j < n; ++j) theta[j] = draw(0.0, kTwoPi);
    double z;
    // Alternate between the z-faces and the r-faces of the box, plus points
    // strictly beyond the shell.
    const int face = s % 3;
    if (face == 0) {
      for (int j = 0; j < n; ++j) r[j] = draw(1e-3, sb.r_max);
      z = (s % 2 == 0 ? 1.0 : -1.0) * sb.z_max;
    } else if (face == 1) {
      const int big = s % n;
      for (int j = 0; j < n; ++j) r[j] = (j == big) ? sb.r_max : draw(1e-3, sb.r_max);
      z = draw(-sb.z_max, sb.z_max);
    } else if (s % 2 == 0) {
      // beyond the shell in z only
      for (int j = 0; j < n; ++j) r[j] = draw(1e-3, sb.r_max);
      z = draw(0.0, 1.0) < 0.5 ? draw(sb.z_max, sb.z_max + 3.0)
                               : draw(-sb.z_max - 3.0, -sb.z_max);
    } else {
      // beyond the shell in one radius
      const int big = s % n;
      for (int j = 0; j < n; ++j)
        r[j] = (j == big) ? draw(sb.r_max, sb.r_max + 3.0) : draw(1e-3, sb.r_max);
      z = draw(-sb.z_max, sb.z_max);
    }
    const PhasePoint p = PhasePoint::from_polar(r, theta, z);
    const double H = eval_H(m, p);
    if (std::abs(H - 1.0) > 1e-12)
      throw ShellViolation("H deviates from 1 on the support shell: H=" +
                               std::to_string(H),
                           p.coords);
  }
  return sb;
}

}  // namespace reeb
