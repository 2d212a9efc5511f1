#ifndef REEB_TRIG_POLY_HPP
#define REEB_TRIG_POLY_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace reeb {

// Real trigonometric polynomial on T^n:
//   value(theta) = sum_terms a*cos(m.theta) + s*sin(m.theta)
// Immutable after construction; evaluation and derivatives are exact.
class TrigPoly {
 public:
  struct Term {
    std::vector<std::int64_t> m;  // integer frequency vector, length n
    double a = 0.0;               // cosine coefficient
    double s = 0.0;               // sine coefficient
  };

  TrigPoly() = default;
  TrigPoly(int n, std::vector<Term> terms);

  // Constant polynomial c on T^n.
  static TrigPoly constant(int n, double c);

  int dim() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }

  double value(std::span<const double> theta) const;

  // d/dtheta_j, analytic.
  double partial(std::span<const double> theta, int j) const;

  // Scalar multiple (used when scaling mu profiles).
  TrigPoly scaled(double c) const;

  // Pointwise sum; dimensions must agree.
  TrigPoly operator+(const TrigPoly& other) const;

 private:
  int n_ = 0;
  std::vector<Term> terms_;
};

}  // namespace reeb

#endif
