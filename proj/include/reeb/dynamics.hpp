#ifndef REEB_DYNAMICS_HPP
#define REEB_DYNAMICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "reeb/contact_reeb.hpp"
#include "reeb/hamiltonian.hpp"
#include "reeb/ode.hpp"
#include "reeb/torus_flows.hpp"

namespace reeb {

enum class Termination { Horizon, Escaped, EarlyStop };

// Time-stamped orbit of the Reeb flow with integrator diagnostics.
struct OrbitTrace {
  std::vector<double> times;
  std::vector<PhasePoint> states;
  long n_steps = 0;
  long n_rejected = 0;
  Termination termination = Termination::Horizon;
};

// Axis-aligned escape box: r_j in [r_min, r_max] for all j, |z| <= z_abs.
struct EscapeBox {
  double r_min = 0.0;
  double r_max = 4.0;
  double z_abs = 3.0;

  bool contains(const PhasePoint& p) const {
    if (std::abs(p.z()) > z_abs) return false;
    for (int j = 0; j < p.dim(); ++j) {
      const double r = p.r(j);
      if (r < r_min || r > r_max) return false;
    }
    return true;
  }
};

// Integrates the Reeb flow from x0 over [0, t_end] (t_end < 0 runs backward),
// storing states at the requested sample times (or ~min(1000, |t|/0.1)
// uniform samples when none given).
OrbitTrace integrate(const HamiltonianModel& m, const PhasePoint& x0, double t_end,
                     const IntegratorConfig& cfg,
                     const std::vector<double>& sample_times = {});

// As above, but stops as soon as the state leaves the box.
OrbitTrace integrate_in_box(const HamiltonianModel& m, const PhasePoint& x0,
                            double t_end, const IntegratorConfig& cfg,
                            const EscapeBox& box);

struct TorusDrift {
  double max_r_dev = 0.0;  // max_j sup_t |r_j(t) - 1|
  double max_z = 0.0;      // sup_t |z(t)|
};

// Launches from (r = 1, theta0, z = 0) and reports the worst deviation from
// the invariant torus over [0, T].
TorusDrift torus_drift(const HamiltonianModel& m, std::vector<double> theta0, double T,
                       const IntegratorConfig& cfg);

struct ZMonotonicityResult {
  double worst_rate = 0.0;
  int checked = 0;  // states off the eps-neighborhood of A x {0}
};

// Asserts dz_rate > 0 at every stored state whose distance to A x {0}
// exceeds eps. Throws MonotonicityViolation with the witness state.
ZMonotonicityResult z_monotonicity_check(const OrbitTrace& trace,
                                         const HamiltonianModel& m,
                                         const InvariantSetSpec& spec, double eps);

// Distance of p to A x {0} in R^{2n+1}, via the sampled embedding of A.
double distance_to_invariant_set(const PhasePoint& p, const InvariantSetSpec& spec);

struct Classification {
  bool stays = true;
  double exit_time = 0.0;  // first stored time outside the box, when !stays
};

Classification classify(const OrbitTrace& trace, const EscapeBox& box);

struct TrappedOrbitResult {
  double s_star = 0.0;
  double bracket_width = 0.0;
  OrbitTrace forward;   // Stays in the box through T_fwd
  OrbitTrace backward;  // escape of the radius-`escape_radius` ball
  bool backward_escaped = false;
  double backward_escape_time = 0.0;  // |t| of the ball exit
};

// Bisection over the one-parameter family s -> x0(s). Since dz > 0 off the
// invariant set, every family orbit eventually rises past the torus level;
// what distinguishes the two sides of the stable set is whether the radii are
// below or above 1 when z first reaches 0. Bisection shrinks the bracket
// between the two sides until a candidate stays in the box through T_fwd.
// Radii strictly grow while z < 0, so the family must start at r < 1 to
// reach the low side; the default lowers z below a ring of radius 0.9:
// x0(s) = (r = 0.9, theta0, z = s).
using InitialFamily = std::function<PhasePoint(double)>;

TrappedOrbitResult search_trapped(const HamiltonianModel& m, const InitialFamily& family,
                                  double s_lo, double s_hi, double T_fwd, double T_bwd,
                                  const EscapeBox& box, const IntegratorConfig& cfg,
                                  double escape_radius = 50.0,
                                  double bisect_tol = 1e-9);

InitialFamily default_torus_family(int n, std::vector<double> theta0);

}  // namespace reeb

#endif
