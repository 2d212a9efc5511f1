#include "reeb/contact_reeb.hpp"

#include <algorithm>
#include <cmath>

namespace reeb {

double alpha_st(const PhasePoint& p, const TangentVector& v) {
  double s = v.dz();
  for (int j = 0; j < p.dim(); ++j)
    s += 0.5 * (p.x(j) * v[2 * j + 1] - p.y(j) * v[2 * j]);
  return s;
}

double d_alpha_st(const PhasePoint&, const TangentVector& v, const TangentVector& w) {
  double s = 0.0;
  const int n = static_cast<int>((v.components.size() - 1) / 2);
  for (int j = 0; j < n; ++j)
    s += v[2 * j] * w[2 * j + 1] - v[2 * j + 1] * w[2 * j];
  return s;
}

std::vector<double> to_cartesian_gradient(const PhasePoint& p, const PolarGradient& g) {
  const int n = p.dim();
  std::vector<double> out(2 * n + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    const double r = p.r(j), ct = p.x(j) / r, st = p.y(j) / r;
    out[2 * j] = ct * g.dr[j] - st / r * g.dtheta[j];
    out[2 * j + 1] = st * g.dr[j] + ct / r * g.dtheta[j];
  }
  out[2 * n] = g.dz;
  return out;
}

std::vector<double> cartesian_grad_H(const HamiltonianModel& m, const PhasePoint& p) {
  if (p.min_r() <= 1.0 / 3.0)
    return std::vector<double>(2 * m.dim() + 1, 0.0);  // H locally constant
  return to_cartesian_gradient(p, grad_H(m, p));
}

std::vector<double> cartesian_grad_K(const HamiltonianModel& m, const PhasePoint& p) {
  if (p.min_r() <= 1.0 / 3.0) return std::vector<double>(2 * m.dim() + 1, 0.0);
  return to_cartesian_gradient(p, grad_K(m, p));
}

TangentVector reeb_field(const HamiltonianModel& m, const PhasePoint& p) {
  const int n = m.dim();
  TangentVector X = TangentVector::zero(n);
  if (p.min_r() <= 1.0 / 3.0) {
    X[2 * n] = 1.0;  // H == 1 with zero gradient here, so X = d/dz
    return X;
  }
  const double H = eval_H(m, p);
  const PolarGradient g = grad_H(m, p);
  double zdot = H;
  for (int j = 0; j < n; ++j) {
    const double r = p.r(j), ct = p.x(j) / r, st = p.y(j) / r;
    const double radial = 0.5 * r * g.dz - g.dtheta[j] / r;  // d/dr_j coefficient
    const double angular = g.dr[j] / r;                      // d/dtheta_j coefficient
    X[2 * j] = ct * radial - p.y(j) * angular;
    X[2 * j + 1] = st * radial + p.x(j) * angular;
    zdot -= 0.5 * r * r * angular;  // the -(r^2/2) d/dz part of the frame
  }
  X[2 * n] = zdot;
  return X;
}

std::vector<TangentVector> xi_frame(const PhasePoint& p) {
  const int n = p.dim();
  std::vector<TangentVector> frame;
  frame.reserve(2 * n);
  for (int j = 0; j < n; ++j) {
    const double r = p.r(j), ct = p.x(j) / r, st = p.y(j) / r;
    TangentVector e1 = TangentVector::zero(n);
    e1[2 * j] = ct;
    e1[2 * j + 1] = st;
    frame.push_back(std::move(e1));
    TangentVector e2 = TangentVector::zero(n);
    e2[2 * j] = -p.y(j);
    e2[2 * j + 1] = p.x(j);
    e2[2 * n] = -0.5 * r * r;
    frame.push_back(std::move(e2));
  }
  return frame;
}

ReebResiduals certify_reeb(const HamiltonianModel& m, const PhasePoint& p) {
  const TangentVector X = reeb_field(m, p);
  const double H = eval_H(m, p);
  const std::vector<double> dH = cartesian_grad_H(m, p);

  auto dH_on = [&](const TangentVector& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < dH.size(); ++i) s += dH[i] * v[static_cast<int>(i)];
    return s;
  };
  // d(alpha_st/H) = (1/H) d(alpha_st) - (1/H^2) dH ^ alpha_st
  auto d_alpha = [&](const TangentVector& v, const TangentVector& w) {
    return d_alpha_st(p, v, w) / H -
           (dH_on(v) * alpha_st(p, w) - dH_on(w) * alpha_st(p, v)) / (H * H);
  };

  ReebResiduals res;
  res.alpha_residual = std::abs(alpha_st(p, X) / H - 1.0);
  for (const TangentVector& e : xi_frame(p))
    res.dalpha_residual = std::max(res.dalpha_residual, std::abs(d_alpha(X, e)));
  return res;
}

double dz_rate(const HamiltonianModel& m, const PhasePoint& p) {
  return h3_margin(m, p);
}

}  // namespace reeb
