#include "reeb/quadratic_core.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "reeb/errors.hpp"
#include "reeb/gridutil.hpp"
#include "reeb/rng.hpp"

namespace reeb {

namespace {

void require_domain(std::span<const double> r) {
  for (double rj : r)
    if (rj <= 0.0) throw DomainError("point leaves U: some r_j <= 0");
}

Eigen::MatrixXd kmatrix_eigen(double b, const NormalizedField& k,
                              std::span<const double> theta) {
  const int n = k.dim();
  const auto kv = k.k(theta);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = (i == j) ? kv[i] + 2.0 * (n - 1) * b : -2.0 * b;
  return A;
}

double point_segment_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                              const Eigen::VectorXd& b) {
  const Eigen::VectorXd ab = b - a;
  const double t = std::clamp(ab.dot(p - a) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

double eval_Q(const QuadForm& q, std::span<const double> r,
              std::span<const double> theta) {
  require_domain(r);
  const int n = q.k->dim();
  const auto kv = q.k->k(theta);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += kv[i] * (r[i] - q.tau) * (r[i] - q.tau);
  double pairs = 0.0;
  for (int p = 0; p < n; ++p)
    for (int qq = p + 1; qq < n; ++qq) pairs += (r[p] - r[qq]) * (r[p] - r[qq]);
  return s + 2.0 * q.b * pairs;  // ordered pairs count each difference twice
}

QGradient grad_Q(const QuadForm& q, std::span<const double> r,
                 std::span<const double> theta) {
  require_domain(r);
  const int n = q.k->dim();
  const auto kv = q.k->k(theta);
  const auto dk = q.k->k_partials(theta);
  QGradient g;
  g.dr.assign(n, 0.0);
  g.dtheta.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double diff = 0.0;
    for (int qq = 0; qq < n; ++qq)
      if (qq != j) diff += r[j] - r[qq];
    g.dr[j] = 2.0 * kv[j] * (r[j] - q.tau) + 4.0 * q.b * diff;
  }
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += dk[i * n + j] * (r[i] - q.tau) * (r[i] - q.tau);
    g.dtheta[j] = s;
  }
  return g;
}

std::vector<double> kmatrix(double b, const NormalizedField& k,
                            std::span<const double> theta) {
  const Eigen::MatrixXd A = kmatrix_eigen(b, k, theta);
  const int n = k.dim();
  std::vector<double> out(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i * n + j] = A(i, j);
  return out;
}

MinEigResult min_eig_over_torus(double b, const NormalizedField& k, int grid_pts) {
  MinEigResult res;
  res.min_eig = std::numeric_limits<double>::infinity();
  for_each_torus_grid(k.dim(), grid_pts, [&](const std::vector<double>& theta) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kmatrix_eigen(b, k, theta),
                                                      Eigen::EigenvaluesOnly);
    const double mn = es.eigenvalues()(0);
    if (mn < res.min_eig) {
      res.min_eig = mn;
      res.argmin_theta = theta;
    }
  });
  return res;
}

std::vector<EigenAsymptoticsRow> eigen_asymptotics(std::span<const double> b_list,
                                                   const NormalizedField& k,
                                                   std::span<const double> theta) {
  const int n = k.dim();
  std::vector<EigenAsymptoticsRow> rows;
  for (double b : b_list) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kmatrix_eigen(b, k, theta));
    EigenAsymptoticsRow row;
    row.b = b;
    row.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    for (int i = 1; i < n; ++i)
      row.ratios.push_back(row.eigenvalues[0] / row.eigenvalues[i]);
    Eigen::VectorXd v = es.eigenvectors().col(0);
    Eigen::VectorXd diag = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    row.angle_to_diagonal = std::acos(std::min(1.0, std::abs(v.dot(diag))));
    rows.push_back(std::move(row));
  }
  return rows;
}

double hausdorff_E_to_J(double b, double c, const NormalizedField& k,
                        std::span<const double> theta, int boundary_samples) {
  if (c <= 0.0) throw DomainError("hausdorff_E_to_J: c must be positive");
  const int n = k.dim();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kmatrix_eigen(b, k, theta));
  if (es.eigenvalues()(0) <= 0.0)
    throw NotPositiveDefinite("A(b) has eigenvalue " +
                              std::to_string(es.eigenvalues()(0)));

  const double sc = std::sqrt(c);
  Eigen::VectorXd endpoint = sc * Eigen::VectorXd::Ones(n);
  // J(c) subset of E(c): the quadratic along the segment peaks at the
  // endpoints, where v^T A v = c * sum k_i = c.
  const double qe = endpoint.dot(kmatrix_eigen(b, k, theta) * endpoint);
  if (qe > c * (1.0 + 1e-9))
    throw DomainError("segment endpoint escapes the ellipsoid: q = " +
                      std::to_string(qe));

  // Boundary of E(c) in eigen-axes: v = sum_i sqrt(c/lambda_i) u_i w_i, |w| = 1.
  Eigen::MatrixXd axes(n, n);
  for (int i = 0; i < n; ++i)
    axes.col(i) = std::sqrt(c / es.eigenvalues()(i)) * es.eigenvectors().col(i);

  double worst = 0.0;
  if (n == 2) {
    for (int s = 0; s < boundary_samples; ++s) {
      const double t = kTwoPi * s / boundary_samples;
      const Eigen::VectorXd p = axes.col(0) * std::cos(t) + axes.col(1) * std::sin(t);
      worst = std::max(worst, point_segment_distance(p, -endpoint, endpoint));
    }
  } else {
    CounterRng rng(0, "hausdorff-sphere");
    for (int s = 0; s < boundary_samples; ++s) {
      Eigen::VectorXd w(n);
      for (int i = 0; i < n; ++i) w(i) = rng.normal(static_cast<std::uint64_t>(s) * n + i);
      w.normalize();
      worst = std::max(worst, point_segment_distance(axes * w, -endpoint, endpoint));
    }
  }
  return worst;
}

namespace {

// Exact 1-D minimization of Q^b[2] in coordinate j, clamped to [lo, hi].
// Q^b[2](r) = (r - 2e)^T A (r - 2e), and A_jj > 0 always.
double coord_min(const Eigen::MatrixXd& A, const Eigen::VectorXd& r, int j, double lo,
                 double hi) {
  double off = 0.0;
  for (int l = 0; l < r.size(); ++l)
    if (l != j) off += A(j, l) * (r(l) - 2.0);
  return std::clamp(2.0 - off / A(j, j), lo, hi);
}

}  // namespace

LemmaLCertificate check_lemma_L(double b, double C, const NormalizedField& k,
                                double r_cap, int r_grid, int theta_grid,
                                bool throw_on_negative) {
  if (!(C > 0.0 && C < 7.0 / 9.0))
    throw ConstraintViolation("Lemma-L certificate requires 0 < C < 7/9");
  const int n = k.dim();
  const double lo = 1.0 / 3.0, mid_hi = 2.0 / 3.0;

  LemmaLCertificate cert;
  cert.min_value = std::numeric_limits<double>::infinity();
  cert.grid_spacing = (mid_hi - lo) / r_grid;

  for_each_torus_grid(n, theta_grid, [&](const std::vector<double>& theta) {
    const Eigen::MatrixXd A = kmatrix_eigen(b, k, theta);
    QuadForm q{b, &k, 2.0};
    for (int pinned = 0; pinned < n; ++pinned) {
      // Coarse multi-start grid on the pinned coordinate and the free range,
      // then projected coordinate descent (Q^b[2] is convex once A > 0).
      const int starts_pinned = std::max(3, r_grid / 8);
      const int starts_free = 5;
      for (int a = 0; a <= starts_pinned; ++a) {
        for (int f = 0; f <= starts_free; ++f) {
          Eigen::VectorXd r(n);
          r(pinned) = lo + (mid_hi - lo) * a / starts_pinned;
          const double rf = lo + (r_cap - lo) * f / starts_free;
          for (int j = 0; j < n; ++j)
            if (j != pinned) r(j) = rf;

          for (int iter = 0; iter < 400; ++iter) {
            double delta = 0.0;
            for (int j = 0; j < n; ++j) {
              const double hi = (j == pinned) ? mid_hi : r_cap;
              const double rn = coord_min(A, r, j, lo, hi);
              delta = std::max(delta, std::abs(rn - r(j)));
              r(j) = rn;
            }
            if (delta < 1e-14) break;
          }

          std::vector<double> rv(r.data(), r.data() + n);
          const double val = eval_Q(q, rv, theta);
          if (val < cert.min_value) {
            cert.min_value = val;
            cert.argmin_r = rv;
            cert.argmin_theta = theta;
          }
        }
      }
    }
  });

  cert.margin = cert.min_value - (1.0 + C);
  if (throw_on_negative && cert.margin <= 0.0)
    throw MarginNegative("Q^b[2] margin " + std::to_string(cert.margin) +
                             " is not positive on L",
                         cert.argmin_r);
  return cert;
}

BSearchResult find_b(double C, const NormalizedField& k, int theta_grid, double r_cap) {
  if (!(C > 0.0 && C < 7.0 / 9.0))
    throw ConstraintViolation("find_b requires 0 < C < 7/9");
  for (double b = 1.0; b <= static_cast<double>(1 << 30); b *= 2.0) {
    auto eig = min_eig_over_torus(b, k, theta_grid);
    if (eig.min_eig <= 0.0) continue;
    auto lem = check_lemma_L(b, C, k, r_cap, 48, theta_grid);
    if (lem.margin > 0.0) return {b, std::move(eig), std::move(lem)};
  }
  throw SearchExhausted("no b up to 2^30 passes both certificates");
}

}  // namespace reeb
