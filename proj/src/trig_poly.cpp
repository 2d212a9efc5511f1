#include "reeb/trig_poly.hpp"

#include <cmath>
#include <stdexcept>

namespace reeb {

TrigPoly::TrigPoly(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
  if (n <= 0) throw std::invalid_argument("TrigPoly: dimension must be positive");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.m.size()) != n)
      throw std::invalid_argument("TrigPoly: frequency vector length mismatch");
  }
}

TrigPoly TrigPoly::constant(int n, double c) {
  Term t;
  t.m.assign(n, 0);
  t.a = c;
  return TrigPoly(n, {t});
}

double TrigPoly::value(std::span<const double> theta) const {
  double v = 0.0;
  for (const auto& t : terms_) {
    double phase = 0.0;
    for (int j = 0; j < n_; ++j) phase += static_cast<double>(t.m[j]) * theta[j];
    v += t.a * std::cos(phase) + t.s * std::sin(phase);
  }
  return v;
}

double TrigPoly::partial(std::span<const double> theta, int j) const {
  double v = 0.0;
  for (const auto& t : terms_) {
    const double mj = static_cast<double>(t.m[j]);
    if (mj == 0.0) continue;
    double phase = 0.0;
    for (int i = 0; i < n_; ++i) phase += static_cast<double>(t.m[i]) * theta[i];
    v += mj * (-t.a * std::sin(phase) + t.s * std::cos(phase));
  }
  return v;
}

TrigPoly TrigPoly::scaled(double c) const {
  std::vector<Term> ts = terms_;
  for (auto& t : ts) {
    t.a *= c;
    t.s *= c;
  }
  return TrigPoly(n_, std::move(ts));
}

TrigPoly TrigPoly::operator+(const TrigPoly& other) const {
  if (other.n_ != n_) throw std::invalid_argument("TrigPoly: dimension mismatch in sum");
  std::vector<Term> ts = terms_;
  ts.insert(ts.end(), other.terms_.begin(), other.terms_.end());
  return TrigPoly(n_, std::move(ts));
}

}  // namespace reeb
