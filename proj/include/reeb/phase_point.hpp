#ifndef REEB_PHASE_POINT_HPP
#define REEB_PHASE_POINT_HPP

#include <cmath>
#include <span>
#include <vector>

namespace reeb {

// Point of R^{2n+1} in Cartesian coordinates (x_1, y_1, ..., x_n, y_n, z)
// with an on-demand polar view (r_j, theta_j).
struct PhasePoint {
  std::vector<double> coords;  // length 2n+1, z last

  PhasePoint() = default;
  explicit PhasePoint(std::vector<double> c) : coords(std::move(c)) {}

  static PhasePoint from_polar(std::span<const double> r, std::span<const double> theta,
                               double z) {
    std::vector<double> c(2 * r.size() + 1);
    for (std::size_t j = 0; j < r.size(); ++j) {
      c[2 * j] = r[j] * std::cos(theta[j]);
      c[2 * j + 1] = r[j] * std::sin(theta[j]);
    }
    c.back() = z;
    return PhasePoint(std::move(c));
  }

  int dim() const { return static_cast<int>((coords.size() - 1) / 2); }
  double x(int j) const { return coords[2 * j]; }
  double y(int j) const { return coords[2 * j + 1]; }
  double z() const { return coords.back(); }

  double r(int j) const { return std::hypot(x(j), y(j)); }
  double theta(int j) const { return std::atan2(y(j), x(j)); }

  std::vector<double> radii() const {
    std::vector<double> out(dim());
    for (int j = 0; j < dim(); ++j) out[j] = r(j);
    return out;
  }
  std::vector<double> angles() const {
    std::vector<double> out(dim());
    for (int j = 0; j < dim(); ++j) out[j] = theta(j);
    return out;
  }
  double min_r() const {
    double mn = r(0);
    for (int j = 1; j < dim(); ++j) mn = std::min(mn, r(j));
    return mn;
  }
};

// Tangent vector in the Cartesian basis (d/dx_j, d/dy_j, d/dz).
struct TangentVector {
  std::vector<double> components;  // length 2n+1, z last

  TangentVector() = default;
  explicit TangentVector(std::vector<double> c) : components(std::move(c)) {}
  static TangentVector zero(int n) { return TangentVector(std::vector<double>(2 * n + 1, 0.0)); }

  double& operator[](int i) { return components[i]; }
  double operator[](int i) const { return components[i]; }
  double dz() const { return components.back(); }
};

}  // namespace reeb

#endif
