#ifndef REEB_CONTACT_REEB_HPP
#define REEB_CONTACT_REEB_HPP

#include <vector>

#include "reeb/hamiltonian.hpp"
#include "reeb/phase_point.hpp"

namespace reeb {

// alpha_st = dz + (1/2) sum (x_j dy_j - y_j dx_j), evaluated on v.
double alpha_st(const PhasePoint& p, const TangentVector& v);

// d(alpha_st) = sum dx_j ^ dy_j, evaluated on (v, w).
double d_alpha_st(const PhasePoint& p, const TangentVector& v, const TangentVector& w);

// Converts a polar-components gradient to Cartesian components.
std::vector<double> to_cartesian_gradient(const PhasePoint& p, const PolarGradient& g);

// Cartesian gradient of H (dH as a 1-form pairs with these components).
std::vector<double> cartesian_grad_H(const HamiltonianModel& m, const PhasePoint& p);
std::vector<double> cartesian_grad_K(const HamiltonianModel& m, const PhasePoint& p);

// Contact vector field of H w.r.t. alpha_st: X = H d/dz + Y, with Y given in
// polar frame components and converted to Cartesian. Equals d/dz exactly
// when min_j r_j <= 1/3, and is the Reeb vector field of alpha_st / H.
TangentVector reeb_field(const HamiltonianModel& m, const PhasePoint& p);

// The 2n frame vectors of xi_st at p: d/dr_j and d/dtheta_j - (r_j^2/2) d/dz.
std::vector<TangentVector> xi_frame(const PhasePoint& p);

struct ReebResiduals {
  double alpha_residual = 0.0;  // |alpha(X) - 1|
  double dalpha_residual = 0.0; // max over frame vectors of |dalpha(X, e_i)|
};

// Certifies the Reeb equations for alpha = alpha_st / H at p, with
// d(alpha) = (1/H) d(alpha_st) - (1/H^2) dH ^ alpha_st expanded analytically.
ReebResiduals certify_reeb(const HamiltonianModel& m, const PhasePoint& p);

// dz(X) = H - (1/2) sum r_j H_{r_j}.
double dz_rate(const HamiltonianModel& m, const PhasePoint& p);

}  // namespace reeb

#endif
