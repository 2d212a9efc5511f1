#include "reeb/torus_flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "reeb/errors.hpp"

namespace reeb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a > std::numbers::pi) a -= kTwoPi;
  if (a < -std::numbers::pi) a += kTwoPi;
  return a;
}

// Visits the uniform grid {2*pi*i/pts}^n.
template <typename Fn>
void for_each_grid(int n, int pts, Fn&& fn) {
  std::vector<int> idx(n, 0);
  std::vector<double> theta(n, 0.0);
  while (true) {
    for (int j = 0; j < n; ++j) theta[j] = kTwoPi * idx[j] / pts;
    fn(theta);
    int j = n - 1;
    while (j >= 0 && ++idx[j] == pts) idx[j--] = 0;
    if (j < 0) break;
  }
}

}  // namespace

double TorusVectorField::sum_nu(std::span<const double> theta) const {
  double s = 0.0;
  for (const auto& nj : nu) s += nj.value(theta);
  return s;
}

double TorusVectorField::min_sum_on_grid(int grid_pts) const {
  double mn = std::numeric_limits<double>::infinity();
  for_each_grid(dim(), grid_pts,
                [&](const std::vector<double>& th) { mn = std::min(mn, sum_nu(th)); });
  return mn;
}

std::vector<std::vector<double>> InvariantSetSpec::sample_points(int count) const {
  std::vector<std::vector<double>> pts;
  switch (kind) {
    case InvariantSetKind::FullTorus: {
      const int per = std::max(1, static_cast<int>(std::ceil(std::pow(count, 1.0 / n))));
      for_each_grid(n, per, [&](const std::vector<double>& th) { pts.push_back(th); });
      break;
    }
    case InvariantSetKind::SubTorus: {
      const int free = n - static_cast<int>(fixed_indices.size());
      std::vector<int> free_idx;
      for (int j = 0; j < n; ++j)
        if (std::find(fixed_indices.begin(), fixed_indices.end(), j) == fixed_indices.end())
          free_idx.push_back(j);
      const int per =
          free > 0 ? std::max(1, static_cast<int>(std::ceil(std::pow(count, 1.0 / free))))
                   : 1;
      std::vector<double> th(n);
      for (std::size_t i = 0; i < fixed_indices.size(); ++i)
        th[fixed_indices[i]] = fixed_values[i];
      if (free == 0) {
        pts.push_back(th);
      } else {
        for_each_grid(free, per, [&](const std::vector<double>& u) {
          for (int j = 0; j < free; ++j) th[free_idx[j]] = u[j];
          pts.push_back(th);
        });
      }
      break;
    }
    case InvariantSetKind::PeriodicOrbit: {
      std::vector<double> th(n);
      for (int i = 0; i < count; ++i) {
        const double t = kTwoPi * i / count;
        for (int j = 0; j < n; ++j)
          th[j] = theta0[j] + t * static_cast<double>(direction[j]);
        pts.push_back(th);
      }
      break;
    }
    case InvariantSetKind::Custom:
      pts = cloud;
      break;
  }
  return pts;
}

double InvariantSetSpec::distance_to_samples(
    std::span<const double> theta, const std::vector<std::vector<double>>& samples) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    double d2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double dj = wrap_angle(theta[j] - s[j]);
      d2 += dj * dj;
    }
    best = std::min(best, d2);
  }
  return std::sqrt(best);
}

NormalizedField::NormalizedField(std::vector<TrigPoly> nu, double lambda)
    : nu_(std::move(nu)), lambda_(lambda) {}

std::vector<double> NormalizedField::k(std::span<const double> theta) const {
  const int n = dim();
  std::vector<double> out(n);
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    out[j] = nu_[j].value(theta);
    s += out[j];
  }
  for (int j = 0; j < n; ++j) out[j] /= s;
  return out;
}

double NormalizedField::k_j(std::span<const double> theta, int j) const {
  double s = 0.0;
  for (const auto& nj : nu_) s += nj.value(theta);
  return nu_[j].value(theta) / s;
}

std::vector<double> NormalizedField::k_partials(std::span<const double> theta) const {
  const int n = dim();
  std::vector<double> val(n), d(n * n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    val[i] = nu_[i].value(theta);
    s += val[i];
  }
  std::vector<double> ds(n, 0.0);  // d(sum nu)/dtheta_j
  std::vector<double> dv(n * n);   // dnu_i/dtheta_j
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      dv[i * n + j] = nu_[i].partial(theta, j);
      ds[j] += dv[i * n + j];
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d[i * n + j] = (dv[i * n + j] * s - val[i] * ds[j]) / (s * s);
  return d;
}

double NormalizedField::f(std::span<const double> theta) const {
  double s = 0.0;
  for (const auto& nj : nu_) s += nj.value(theta);
  return 2.0 * lambda_ / s;
}

NormalizedField normalize_field(const TorusVectorField& V, double lambda, int grid_pts) {
  const double mn = V.min_sum_on_grid(grid_pts);
  if (mn <= 0.0)
    throw TransversalityViolation("sum(nu) attains " + std::to_string(mn) +
                                  " on the verification grid");
  if (lambda <= 1.0) throw ConstraintViolation("lambda must exceed 1");
  return NormalizedField(V.nu, lambda);
}

std::vector<std::vector<std::int64_t>> annihilator_basis(
    std::span<const std::int64_t> direction) {
  const int n = static_cast<int>(direction.size());
  std::vector<std::int64_t> w(direction.begin(), direction.end());
  // Unimodular row reduction M*d = (g,0,...,0); rows 2..n of M span the
  // annihilator lattice.
  std::vector<std::vector<std::int64_t>> M(n, std::vector<std::int64_t>(n, 0));
  for (int i = 0; i < n; ++i) M[i][i] = 1;

  auto nonzeros = [&]() {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (w[i] != 0) idx.push_back(i);
    return idx;
  };

  auto nz = nonzeros();
  if (nz.empty()) throw UnsupportedSet("periodic-orbit direction is the zero vector");

  while (nz.size() > 1) {
    int p = nz[0];
    for (int i : nz)
      if (std::llabs(w[i]) < std::llabs(w[p])) p = i;
    for (int i : nz) {
      if (i == p) continue;
      const std::int64_t q = w[i] / w[p];
      w[i] -= q * w[p];
      for (int j = 0; j < n; ++j) M[i][j] -= q * M[p][j];
    }
    nz = nonzeros();
  }

  const int pivot = nz[0];
  std::swap(M[0], M[pivot]);
  std::vector<std::vector<std::int64_t>> basis(M.begin() + 1, M.end());
  return basis;
}

TrigPoly build_mu(const InvariantSetSpec& spec) {
  const int n = spec.n;
  switch (spec.kind) {
    case InvariantSetKind::FullTorus:
      return TrigPoly::constant(n, 0.0);
    case InvariantSetKind::SubTorus: {
      // sum_{i in S} (1 - cos(theta_i - c_i))
      std::vector<TrigPoly::Term> terms;
      {
        TrigPoly::Term one;
        one.m.assign(n, 0);
        one.a = static_cast<double>(spec.fixed_indices.size());
        terms.push_back(one);
      }
      for (std::size_t i = 0; i < spec.fixed_indices.size(); ++i) {
        TrigPoly::Term t;
        t.m.assign(n, 0);
        t.m[spec.fixed_indices[i]] = 1;
        t.a = -std::cos(spec.fixed_values[i]);
        t.s = -std::sin(spec.fixed_values[i]);
        terms.push_back(t);
      }
      return TrigPoly(n, std::move(terms));
    }
    case InvariantSetKind::PeriodicOrbit: {
      // sum over annihilator generators m of (1 - cos(m.(theta - theta0)))
      const auto basis = annihilator_basis(spec.direction);
      if (basis.empty() && n > 1)
        throw UnsupportedSet("annihilator lattice of the direction is trivial");
      std::vector<TrigPoly::Term> terms;
      {
        TrigPoly::Term one;
        one.m.assign(n, 0);
        one.a = static_cast<double>(basis.size());
        terms.push_back(one);
      }
      for (const auto& m : basis) {
        double phase0 = 0.0;
        for (int j = 0; j < n; ++j) phase0 += static_cast<double>(m[j]) * spec.theta0[j];
        TrigPoly::Term t;
        t.m = m;
        // 1 - cos(m.theta - phase0) expanded:
        t.a = -std::cos(phase0);
        t.s = -std::sin(phase0);
        terms.push_back(t);
      }
      return TrigPoly(n, std::move(terms));
    }
    case InvariantSetKind::Custom:
      if (!spec.custom_mu) throw UnsupportedSet("Custom invariant set requires a mu");
      return *spec.custom_mu;
  }
  throw std::logic_error("unreachable");
}

double check_invariance(const TorusVectorField& V, const InvariantSetSpec& spec,
                        double T, double tol, const IntegratorConfig& cfg) {
  const int n = V.dim();
  auto samples = spec.sample_points(16);
  if (samples.empty()) throw std::invalid_argument("invariant set carries no samples");

  NormalizedField nf(V.nu, 2.0);  // lambda irrelevant for the k-flow
  Dopri5 solver(cfg);
  auto rhs = [&](double, const std::vector<double>& th, std::vector<double>& dth) {
    const auto kv = nf.k(th);
    for (int j = 0; j < n; ++j) dth[j] = kv[j];
  };

  const bool use_mu = spec.kind != InvariantSetKind::Custom;
  TrigPoly mu = use_mu ? build_mu(spec) : TrigPoly::constant(n, 0.0);

  double drift = 0.0;
  std::vector<double> checkpoints;
  for (int i = 1; i <= 20; ++i) checkpoints.push_back(T * i / 20.0);

  for (const auto& s0 : samples) {
    auto measure = [&](double, const std::vector<double>& th) {
      const double d = use_mu ? mu.value(th) : spec.distance_to_samples(th, samples);
      drift = std::max(drift, d);
    };
    if (T == 0.0) {
      measure(0.0, s0);
      continue;
    }
    solver.integrate(rhs, 0.0, s0, T, checkpoints, measure);
  }
  if (drift > tol)
    throw InvarianceViolation("invariance drift " + std::to_string(drift) +
                              " exceeds tolerance " + std::to_string(tol));
  return drift;
}

}  // namespace reeb
