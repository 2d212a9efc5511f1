#ifndef REEB_QUADRATIC_CORE_HPP
#define REEB_QUADRATIC_CORE_HPP

#include <span>
#include <vector>

#include "reeb/torus_flows.hpp"

namespace reeb {

// Q^b[tau](r, theta) = sum_i k_i(theta)(r_i - tau)^2 + b sum_{p != q} (r_p - r_q)^2.
// The pair sum ranges over ordered pairs, matching the entries of A(b).
struct QuadForm {
  double b = 0.0;
  const NormalizedField* k = nullptr;
  double tau = 0.0;
};

// Throws DomainError when some r_j <= 0.
double eval_Q(const QuadForm& q, std::span<const double> r, std::span<const double> theta);

struct QGradient {
  std::vector<double> dr;      // 2 k_j (r_j - tau) + 4 b sum_{q != j} (r_j - r_q)
  std::vector<double> dtheta;  // sum_i dk_i/dtheta_j (r_i - tau)^2
};

QGradient grad_Q(const QuadForm& q, std::span<const double> r,
                 std::span<const double> theta);

// A(b)(theta): diagonal k_i + 2(n-1)b, off-diagonal -2b.
std::vector<double> kmatrix(double b, const NormalizedField& k,
                            std::span<const double> theta);  // row-major n x n

struct MinEigResult {
  double min_eig = 0.0;
  std::vector<double> argmin_theta;
};

// Smallest eigenvalue of A(b)(theta) over a uniform theta grid.
MinEigResult min_eig_over_torus(double b, const NormalizedField& k, int grid_pts = 64);

struct EigenAsymptoticsRow {
  double b = 0.0;
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> ratios;       // lambda_1 / lambda_i, i >= 2
  double angle_to_diagonal = 0.0;   // principal angle of the bottom eigenvector
                                    // to span{(1,...,1)}, radians
};

std::vector<EigenAsymptoticsRow> eigen_asymptotics(std::span<const double> b_list,
                                                   const NormalizedField& k,
                                                   std::span<const double> theta);

// Hausdorff distance between E(c) = {v : v^T A(b) v <= c} and the segment
// J(c) joining +-(sqrt c, ..., sqrt c). Verifies J(c) subset of E(c) first.
// Throws NotPositiveDefinite if A(b)(theta) has a nonpositive eigenvalue.
double hausdorff_E_to_J(double b, double c, const NormalizedField& k,
                        std::span<const double> theta, int boundary_samples = 4096);

struct LemmaLCertificate {
  double margin = 0.0;      // min Q^b[2] on closure(L) minus (1 + C)
  double min_value = 0.0;
  std::vector<double> argmin_r;
  std::vector<double> argmin_theta;
  double grid_spacing = 0.0;  // for the recorded Lipschitz-margin argument
};

// Certifies Q^b[2] > 1 + C on L by grid minimization plus local polish.
// r coordinates not pinned to (1/3, 2/3) are capped at r_cap.
LemmaLCertificate check_lemma_L(double b, double C, const NormalizedField& k,
                                double r_cap = 5.0, int r_grid = 48,
                                int theta_grid = 16, bool throw_on_negative = false);

struct BSearchResult {
  double b = 0.0;
  MinEigResult eig_certificate;
  LemmaLCertificate lemma_certificate;
};

// Doubling search from b = 1 for the smallest power of two passing both the
// positive-definiteness and the Lemma-L certificates. Throws SearchExhausted
// past 2^30, ConstraintViolation unless 0 < C < 7/9.
BSearchResult find_b(double C, const NormalizedField& k, int theta_grid = 16,
                     double r_cap = 5.0);

}  // namespace reeb

#endif
