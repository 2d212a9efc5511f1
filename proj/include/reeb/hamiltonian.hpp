#ifndef REEB_HAMILTONIAN_HPP
#define REEB_HAMILTONIAN_HPP

#include <vector>

#include "reeb/phase_point.hpp"
#include "reeb/profiles.hpp"
#include "reeb/quadratic_core.hpp"
#include "reeb/torus_flows.hpp"
#include "reeb/trig_poly.hpp"

namespace reeb {

// The contact Hamiltonian
//   K = lambda exp{ [1 + C - Q^b[2] - (z^2 + mu) sum_j r_j] prod_l rho(r_l) - C },
//   H = G(K),
// well-defined on all of R^{2n+1}: whenever some r_j <= 1/3 the rho product
// vanishes and K = lambda e^{-C} exactly, so evaluation short-circuits there
// and polar-axis singularities never arise.
class HamiltonianModel {
 public:
  HamiltonianModel(NormalizedField k, TrigPoly mu, double C, double b,
                   double min_eig_certificate);

  int dim() const { return k_.dim(); }
  double C() const { return C_; }
  double lambda() const { return k_.lambda(); }
  double b() const { return b_; }
  double min_eig() const { return min_eig_; }
  const NormalizedField& k() const { return k_; }
  const TrigPoly& mu() const { return mu_; }
  const RhoProfile& rho() const { return rho_; }
  const GProfile& G() const { return G_; }

 private:
  NormalizedField k_;
  TrigPoly mu_;
  double C_;
  double b_;
  double min_eig_;
  RhoProfile rho_;
  GProfile G_;
};

struct PolarGradient {
  std::vector<double> dr;
  std::vector<double> dtheta;
  double dz = 0.0;
};

double eval_K(const HamiltonianModel& m, const PhasePoint& p);
PolarGradient grad_K(const HamiltonianModel& m, const PhasePoint& p);

double eval_H(const HamiltonianModel& m, const PhasePoint& p);
PolarGradient grad_H(const HamiltonianModel& m, const PhasePoint& p);

// sum_j r_j (log H)_{r_j}; strictly below 2 off A x {0}, exactly 2 on it.
double radial_log_derivative(const HamiltonianModel& m, const PhasePoint& p);

// H - (1/2) sum_j r_j H_{r_j}; equals dz(X) for the contact field of H.
double h3_margin(const HamiltonianModel& m, const PhasePoint& p);

struct SupportBounds {
  double r_max = 0.0;
  double z_max = 0.0;
};

// Box outside which H == 1; verifies |H - 1| <= 1e-12 on a sampled boundary
// shell (throws ShellViolation with the witness point on failure).
SupportBounds support_bounds(const HamiltonianModel& m, int shell_samples = 1000);

}  // namespace reeb

#endif
