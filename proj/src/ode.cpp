#include "reeb/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "reeb/errors.hpp"

namespace reeb {

namespace {

// Dormand-Prince RK5(4)7M coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat (error weights), bhat from the embedded 4th-order formula.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Dopri5::Result Dopri5::integrate(const Rhs& f, double t0, std::vector<double> y0,
                                 double t1, const std::vector<double>& sample_times,
                                 const Observer& observer,
                                 const StopCondition& stop_when) const {
  const std::size_t n = y0.size();
  const double dir = (t1 >= t0) ? 1.0 : -1.0;

  std::vector<double> y = std::move(y0);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

  Result res;
  if (observer) observer(t0, y);
  if (t0 == t1) {
    res.t_end = t0;
    res.y_end = y;
    return res;
  }

  double t = t0;
  std::size_t next_sample = 0;
  // Skip samples at or before t0.
  while (next_sample < sample_times.size() && dir * (sample_times[next_sample] - t0) <= 0.0)
    ++next_sample;

  f(t, y, k1);  // FSAL: stays valid across accepted and rejected steps

  // Initial step guess.
  double h = std::min(cfg_.max_step, std::abs(t1 - t0));
  {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = cfg_.atol + cfg_.rtol * std::abs(y[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    if (dnf > 1e-10 && dny > 1e-10) h = std::min(h, 0.01 * std::sqrt(dny / dnf));
    h = std::max(h, 1e-10);
  }

  const double err_exp = 0.2;
  const double safety = 0.9;
  double err_old = 1e-4;  // PI controller memory

  while (dir * (t1 - t) > 0.0) {
    if (res.n_steps + res.n_rejected >= cfg_.max_steps)
      throw StepLimit("integration step limit reached at t=" + std::to_string(t));

    h = std::min(h, std::abs(t1 - t));
    // Clamp to the next sample time so the output lands on it exactly.
    if (next_sample < sample_times.size())
      h = std::min(h, std::abs(sample_times[next_sample] - t));
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw StepUnderflow("step size underflow at t=" + std::to_string(t));
    const double hs = dir * h;

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
    f(t + c2 * hs, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * hs, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * hs, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * hs, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                             a65 * k5[i]);
    f(t + hs, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(t + hs, ynew, k7);  // FSAL

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i] + e7 * k7[i]);
      const double sk = cfg_.atol + cfg_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sk) * (ei / sk);
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (err <= 1.0) {
      t += hs;
      y.swap(ynew);
      k1.swap(k7);  // FSAL reuse
      ++res.n_steps;

      const bool at_sample = next_sample < sample_times.size() &&
                             std::abs(t - sample_times[next_sample]) <=
                                 1e-12 * std::max(1.0, std::abs(t));
      if (at_sample) ++next_sample;
      if (observer && (at_sample || dir * (t1 - t) <= 0.0)) observer(t, y);

      if (stop_when && stop_when(t, y)) {
        if (observer && !at_sample && dir * (t1 - t) > 0.0) observer(t, y);
        res.stopped_early = true;
        break;
      }

      // PI step control (Gustafsson).
      double fac = safety * std::pow(err > 1e-16 ? err : 1e-16, -err_exp) *
                   std::pow(err_old, 0.08);
      fac = std::clamp(fac, 0.2, 5.0);
      h = std::min(h * fac, cfg_.max_step);
      err_old = std::max(err, 1e-4);
    } else {
      ++res.n_rejected;
      const double fac = std::max(0.1, safety * std::pow(err, -err_exp));
      h *= fac;
    }
  }

  res.t_end = t;
  res.y_end = y;
  return res;
}

}  // namespace reeb
