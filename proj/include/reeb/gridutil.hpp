#ifndef REEB_GRIDUTIL_HPP
#define REEB_GRIDUTIL_HPP

#include <cmath>
#include <numbers>
#include <vector>

namespace reeb {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a > std::numbers::pi) a -= kTwoPi;
  if (a < -std::numbers::pi) a += kTwoPi;
  return a;
}

// Visits the uniform torus grid {2*pi*i/pts : 0 <= i < pts}^n in
// lexicographic order.
template <typename Fn>
void for_each_torus_grid(int n, int pts, Fn&& fn) {
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

}  // namespace reeb

#endif
