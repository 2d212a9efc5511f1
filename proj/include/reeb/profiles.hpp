#ifndef REEB_PROFILES_HPP
#define REEB_PROFILES_HPP

#include <vector>

namespace reeb {

// Classical exp(-1/t) smooth step:
//   rho(r) = s(3r-1) / (s(3r-1) + s(2-3r)),  s(t) = exp(-1/t) for t > 0 else 0.
// rho == 0 iff r <= 1/3, rho == 1 iff r >= 2/3, monotone, symmetric about 1/2.
class RhoProfile {
 public:
  double operator()(double r) const;
  double derivative(double r) const;
};

// Monotone C-infinity rescaling profile G with
//   (G1) G(t) = t for t >= identity_start() (a neighborhood of lambda),
//   (G2) G(t) = 1 for t <= lambda*exp(-C),
//   (G3) t (log G)'(t) <= 1 everywhere.
// Built on the log scale u = log t: g(u) = log G(e^u) has slope g' rising
// smoothly from 0 to 1 inside (log lambda - C, log lambda); the ramp start a
// is root-found so that the ramp area makes g(log lambda) = log lambda.
class GProfile {
 public:
  double operator()(double t) const;     // G(t)
  double derivative(double t) const;     // G'(t)
  double log_slope_at_log(double u) const;  // g'(u) = t (log G)'(t), u = log t

  double lambda() const { return lambda_; }
  double C() const { return C_; }
  double ramp_start() const { return a_; }
  double ramp_width() const { return w_; }
  double plateau_end() const;     // lambda * exp(-C): G = 1 at or below
  double identity_start() const;  // exp(a + w): G(t) = t at or above

 private:
  friend GProfile build_G(double lambda, double C);
  double g_at_log(double u) const;  // g(u), table-interpolated on the ramp

  double lambda_ = 0.0, C_ = 0.0;
  double a_ = 0.0, w_ = 0.0;
  std::vector<double> table_g_;   // g at uniform nodes over [a, a+w]
  std::vector<double> table_gp_;  // exact g' at the same nodes
};

// Throws ConstraintViolation unless 1 < lambda < e^C; InfeasibleRamp if the
// root-finding bracket fails (cannot happen when log lambda < C; guarded).
GProfile build_G(double lambda, double C);

inline RhoProfile build_rho() { return {}; }

}  // namespace reeb

#endif
