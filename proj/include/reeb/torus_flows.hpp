#ifndef REEB_TORUS_FLOWS_HPP
#define REEB_TORUS_FLOWS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "reeb/ode.hpp"
#include "reeb/trig_poly.hpp"

namespace reeb {

// V = sum_j nu_j d/dtheta_j on T^n.
struct TorusVectorField {
  std::vector<TrigPoly> nu;

  int dim() const { return static_cast<int>(nu.size()); }
  double sum_nu(std::span<const double> theta) const;

  // min over a uniform grid (pts per angle) of sum_j nu_j.
  double min_sum_on_grid(int grid_pts = 64) const;
};

enum class InvariantSetKind { FullTorus, SubTorus, PeriodicOrbit, Custom };

// Description of a compact invariant set A of the torus flow, together
// with a nonnegative profile mu vanishing to second order exactly on A.
struct InvariantSetSpec {
  InvariantSetKind kind = InvariantSetKind::FullTorus;
  int n = 0;

  // SubTorus: {theta_i = c_i, i in fixed_indices}.
  std::vector<int> fixed_indices;
  std::vector<double> fixed_values;

  // PeriodicOrbit: closure of {theta0 + t*direction}.
  std::vector<double> theta0;
  std::vector<std::int64_t> direction;

  // Custom: explicit sample cloud plus a user-supplied mu.
  std::vector<std::vector<double>> cloud;
  std::optional<TrigPoly> custom_mu;

  // Points on A, roughly `count` of them.
  std::vector<std::vector<double>> sample_points(int count) const;

  // Angle-wise distance of theta to the sampled set (2*pi-periodic metric).
  double distance_to_samples(std::span<const double> theta,
                             const std::vector<std::vector<double>>& samples) const;
};

// Output of the normalization k_j = nu_j / sum(nu), f = 2*lambda / sum(nu).
// k and f are evaluated as quotients of TrigPoly values, never re-expanded.
class NormalizedField {
 public:
  NormalizedField(std::vector<TrigPoly> nu, double lambda);

  int dim() const { return static_cast<int>(nu_.size()); }
  double lambda() const { return lambda_; }

  std::vector<double> k(std::span<const double> theta) const;
  double k_j(std::span<const double> theta, int j) const;

  // dk_i/dtheta_j via the quotient rule; out(i,j) row-major n x n.
  std::vector<double> k_partials(std::span<const double> theta) const;

  double f(std::span<const double> theta) const;

  const std::vector<TrigPoly>& nu() const { return nu_; }

 private:
  std::vector<TrigPoly> nu_;
  double lambda_;
};

// Throws TransversalityViolation if min over the grid of sum(nu) <= 0.
NormalizedField normalize_field(const TorusVectorField& V, double lambda,
                                int grid_pts = 64);

// Closed-form mu for the supported kinds; Custom returns the user profile.
// Throws UnsupportedSet when no annihilator lattice exists.
TrigPoly build_mu(const InvariantSetSpec& spec);

// Integer generators of {m : m . direction = 0} (rank n-1 lattice basis).
std::vector<std::vector<std::int64_t>> annihilator_basis(
    std::span<const std::int64_t> direction);

// Integrates theta' = k(theta) from samples of A for time T and returns the
// worst distance to A (mu-value proxy for closed-form kinds).
// Throws InvarianceViolation if the drift exceeds tol.
double check_invariance(const TorusVectorField& V, const InvariantSetSpec& spec,
                        double T, double tol, const IntegratorConfig& cfg = {});

}  // namespace reeb

#endif
